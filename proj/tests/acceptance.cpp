// One line per acceptance criterion; exit status is nonzero if any fails.
#include <chrono>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "gen.hpp"
#include "kpref/embed.hpp"
#include "kpref/pipeline.hpp"
#include "oracle.hpp"

using namespace kpref;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
    std::size_t failures = 0;
    void fail(const std::string& why) {
        if (failures++ == 0) detail = why;
        pass = false;
    }
};

const CorpusEntry& entry(const std::string& name) {
    for (const auto& e : corpus())
        if (e.name == name) return e;
    throw std::out_of_range(name);
}

OrdNotation N(std::uint64_t n) { return OrdNotation::nat(n); }

// 1. compare against the CNF evaluator
Outcome oracle_equivalence() {
    Outcome out;
    std::vector<std::vector<OrdNotation>> memo;
    std::vector<OrdNotation> all;
    for (std::size_t s = 1; s <= 8; ++s)
        for (auto& a : oracle::enumerate_size(s, 3, memo)) all.push_back(a);
    std::vector<oracle::Cnf> vals;
    vals.reserve(all.size());
    for (auto& a : all) vals.push_back(oracle::eval(a));
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < all.size(); ++i)
        for (std::size_t j = 0; j < all.size(); ++j, ++pairs)
            if (cmp_sign(all[i], all[j]) != oracle::cmp(vals[i], vals[j])) out.fail(all[i].str() + " vs " + all[j].str());
    std::mt19937_64 rng(1);
    std::size_t random = 0;
    while (random < 10000) {
        auto a = oracle::random_plain(rng, 4), b = oracle::random_plain(rng, 4);
        if (a.size() <= 8 && b.size() <= 8) continue;
        ++random;
        if (cmp_sign(a, b) != oracle::cmp(oracle::eval(a), oracle::eval(b))) out.fail(a.str() + " vs " + b.str());
    }
    std::ostringstream os;
    os << all.size() << " notations, " << pairs << " pairs exhaustive, " << random << " random";
    if (out.pass) out.detail = os.str();
    return out;
}

// 2. order and natural sum laws
Outcome well_order() {
    Outcome out;
    std::mt19937_64 rng(2);
    for (int i = 0; i < 10000; ++i) {
        auto a = oracle::random_full(rng, 3), b = oracle::random_full(rng, 3), c = oracle::random_full(rng, 3);
        int ab = cmp_sign(a, b), ba = cmp_sign(b, a), bc = cmp_sign(b, c), ac = cmp_sign(a, c);
        if (ab != -ba) out.fail("antisymmetry " + a.str() + " / " + b.str());
        if (ab < 0 && bc < 0 && ac >= 0) out.fail("transitivity " + a.str() + " " + b.str() + " " + c.str());
        if (ab == 0 && bc == 0 && ac != 0) out.fail("Equal not transitive " + a.str());
    }
    for (int i = 0; i < 10000; ++i) {
        auto a = oracle::random_full(rng, 3), b = oracle::random_full(rng, 3), c = oracle::random_full(rng, 3);
        if (!ord_eq(natural_sum(a, b), natural_sum(b, a))) out.fail("commutativity " + a.str() + " " + b.str());
        if (!ord_eq(natural_sum(natural_sum(a, b), c), natural_sum(a, natural_sum(b, c))))
            out.fail("associativity " + a.str() + " " + b.str() + " " + c.str());
        if (cmp_sign(natural_sum(a, b), natural_sum(a, c)) != cmp_sign(b, c))
            out.fail("monotonicity " + a.str() + " " + b.str() + " " + c.str());
    }
    if (out.pass) out.detail = "10000 triples, 10000 sum triples";
    return out;
}

// random notation over the whole alphabet, including values at or above eps(W+1)
OrdNotation random_any(std::mt19937_64& rng, int depth) {
    std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 5);
    switch (pick(rng)) {
    case 0: return N(std::uniform_int_distribution<int>(0, 3)(rng));
    case 1: return OrdNotation::omega();
    case 2: return OrdNotation::pow(random_any(rng, depth - 1));
    case 3: return OrdNotation::sum({random_any(rng, depth - 1), random_any(rng, depth - 1)});
    default: return OrdNotation::eps(random_any(rng, depth - 1));
    }
}

// 3. e-tower lemma
Outcome e_tower_lemma() {
    Outcome out;
    std::vector<OrdNotation> towers;
    for (std::uint64_t n = 0; n <= 12; ++n) towers.push_back(e_tower(n));
    std::mt19937_64 rng(3);
    std::size_t tested = 0, below = 0;
    std::vector<OrdNotation> cases;
    for (std::uint64_t n = 0; n <= 8; ++n) cases.push_back(e_tower(n));
    cases.push_back(OrdNotation::eps(omega_plus(1)));
    cases.push_back(OrdNotation::sum({OrdNotation::eps(omega_plus(1)), N(1)}));
    cases.push_back(OrdNotation::eps(omega_plus(2)));
    while (cases.size() < 20000) {
        auto a = random_any(rng, 4);
        if (a.size() <= 10) cases.push_back(a);
    }
    for (const auto& a : cases) {
        ++tested;
        auto r = below_eps_omega_plus_1(a);
        bool tower = false;
        for (const auto& t : towers) tower |= ord_lt(a, t);
        if (r.flag != tower) out.fail(a.str());
        if (r.flag) ++below;
    }
    if (out.pass) {
        std::ostringstream os;
        os << tested << " notations, " << below << " below";
        out.detail = os.str();
    }
    return out;
}

// 4. rank laws
Outcome rank_laws() {
    Outcome out;
    std::mt19937_64 rng(4);
    const OrdNotation W = OrdNotation::omega();
    const OrdNotation top = OrdNotation::sum({W, OrdNotation::pow(N(1))});
    auto battery = standard_battery();
    std::size_t unbounded = 0;
    for (int i = 0; i < 5000; ++i) {
        FormP f = gen::closed(rng, 3);
        OrdNotation r = formula_rank(f);
        if (ord_lt(r, W) != f->is_delta0()) out.fail("Delta0 iff below Omega: " + show(f));
        if (f->is_delta0()) continue;
        ++unbounded;
        if (!ord_le(W, r) || !ord_lt(r, top)) out.fail("band: " + show(f));
        if (is_atomic(f)) continue;
        if (term_indexed(f)) {
            for (const auto& s : battery.terms)
                if (!ord_lt(formula_rank(decompose_child(f, s)), r)) out.fail("child rank: " + show(f) + " at " + show(s));
        } else {
            for (int j = 0; j < 2; ++j)
                if (!ord_lt(formula_rank(decompose_child(f, j)), r)) out.fail("child rank: " + show(f));
        }
    }
    if (out.pass) out.detail = "5000 formulas, " + std::to_string(unbounded) + " unbounded";
    return out;
}

// 5. transformer contracts on the corpus
Outcome transformer_contracts() {
    Outcome out;
    std::size_t events = 0;
    std::map<std::string, std::size_t> by_op;
    set_transform_hook([&](const TransformEvent& e) {
        ++events;
        ++by_op[e.op];
        if (e.out->end() != e.expected_end)
            out.fail(e.op + ": end " + e.out->end().str() + " expected " + e.expected_end.str());
        if (!ord_le(e.out->length, e.length_cap)) out.fail(e.op + ": length " + e.out->length.str() + " above " + e.length_cap.str());
        if (e.out->rank.is_zero() && e.out->rule == Rule::Axiom) return;
        if (!ord_le(e.out->rank, e.rank_cap)) out.fail(e.op + ": rank " + e.out->rank.str() + " above " + e.rank_cap.str());
    });
    auto battery = standard_battery();
    WfOptions wo;
    wo.depth = 6;
    std::size_t explored = 0;
    auto explore = [&](const std::string& what, const DerivP& w) {
        WfReport r = check_wf_bounded(w, battery, wo);
        explored += r.visited;
        for (const auto& v : r.violations) out.fail(what + " " + v.path + ": " + v.message);
    };
    FormP junk = parse_formula("(mem {} {})");
    for (const auto& e : corpus()) {
        try {
            FinProofP p = parse_proof(e.text);
            DerivP w = embed_proof(p, parse_subst(e.subst));
            explore(e.name + "/wkn", wkn(Sequent{junk}, w));
            Sequent end = w->end();
            for (const auto& f : end.items()) {
                if (!is_conjunctive(f) || f->is_delta0()) continue;
                if (term_indexed(f)) {
                    for (const auto& s : battery.terms) explore(e.name + "/inv", inv(f, w, s));
                } else {
                    for (int i = 0; i < 2; ++i) explore(e.name + "/inv", inv(f, w, i));
                }
            }
            if (w->rule == Rule::Cut && ord_lt(OrdNotation::omega(), formula_rank(w->principal)))
                explore(e.name + "/red", red(w->principal, w->kid(0), w->kid(1), w->side));
            // eliminate down to Omega+1, raising the bound first where the proof has no high cuts
            DerivP up = ord_lt(w->rank, omega_plus(2)) ? with_bounds(w, w->length, omega_plus(2)) : w;
            while (ord_lt(omega_plus(1), up->rank)) {
                OrdNotation len = up->length, rk = up->rank;
                up = cut_elim(up);
                if (!ord_eq(up->rank, ord_pred(rk))) out.fail(e.name + ": cut_elim rank not decremented");
                if (!ord_le(up->length, OrdNotation::pow(len))) out.fail(e.name + ": cut_elim length above omega^a");
                explore(e.name + "/cutelim", up);
            }
        } catch (const std::exception& ex) {
            out.fail(e.name + ": " + ex.what());
        }
    }
    set_transform_hook(nullptr);
    if (out.pass) {
        std::ostringstream os;
        os << events << " transformer outputs checked (";
        bool first = true;
        for (const auto& [op, n] : by_op) {
            os << (first ? "" : ", ") << op << " " << n;
            first = false;
        }
        os << "), " << explored << " nodes explored";
        out.detail = os.str();
    }
    return out;
}

// 6. embedding bounds
Outcome embedding_bounds() {
    Outcome out;
    for (const auto& e : corpus()) {
        FinProofP p = parse_proof(e.text);
        CheckReport chk = check_fin(*p);
        DerivP w = embed_proof(p, parse_subst(e.subst));
        OrdNotation bound = embedding_bound(*p, chk.k);
        if (!ord_lt(w->length, bound)) out.fail(e.name + ": length " + w->length.str() + " not below " + bound.str());
        if (!ord_eq(w->rank, omega_plus(chk.m))) out.fail(e.name + ": rank " + w->rank.str());
        if (chk.k != e.k) out.fail(e.name + ": k mismatch");
        if (!is_successor(w->rank) && chk.m > 0) out.fail(e.name + ": rank not Omega+m");
    }
    if (out.pass) out.detail = std::to_string(corpus().size()) + " corpus proofs";
    return out;
}

// 7. end-to-end reflection and negative controls
Outcome reflection() {
    Outcome out;
    PipelineOptions opt;
    opt.universe_rank = 4;
    opt.omega_fuel = 8;
    std::size_t good = 0;
    for (const char* name : {"pair", "union", "sep", "col", "cut", "forall"}) {
        const auto& e = entry(name);
        PipelineReport r = reflect_text(e.text, e.subst, opt, name);
        if (!r.ok()) {
            out.fail(std::string(name) + " failed at " + r.failed_stage + ": " + r.violations.front().message);
            continue;
        }
        if (r.verdict != Truth::True) out.fail(std::string(name) + ": verdict " + truth_str(r.verdict));
        else if (!ord_le(*r.final_rank, omega_plus(1))) out.fail(std::string(name) + ": final rank");
        else if (!below_eps_omega_plus_1(*r.final_length).flag) out.fail(std::string(name) + ": final length");
        else ++good;
        std::size_t cuts = 0;
        for (const auto& s : r.stages) cuts += s.name == "cutelim";
        if (cuts + 1 != std::max(e.m, 1u)) out.fail(std::string(name) + ": expected m-1 cut elimination stages");
    }
    std::size_t caught = 0;
    for (const auto& s : sabotages()) {
        opt.sabotage = s.mutate;
        PipelineReport r = reflect_text(s.text, s.subst, opt, s.name);
        opt.sabotage = nullptr;
        bool hit = false;
        for (const auto& v : r.violations) hit |= v.stage == s.stage && v.message.find(s.message) != std::string::npos;
        if (r.failed_stage != s.stage || !hit)
            out.fail(s.name + ": rejected at '" + r.failed_stage + "' instead of " + s.stage);
        else ++caught;
    }
    if (out.pass) out.detail = std::to_string(good) + " proofs True, " + std::to_string(caught) + " sabotages rejected";
    return out;
}

// 8. laziness
Outcome laziness() {
    Outcome out;
    const auto& e = entry("forall");
    reset_branch_calls();
    DerivP w = embed_proof(parse_proof(e.text), parse_subst(e.subst));
    DerivP up = with_bounds(w, w->length, omega_plus(2));
    DerivP j = cut_elim(up);
    (void)node_info(*j);
    std::uint64_t before = branch_calls();
    if (before != 0) out.fail(std::to_string(before) + " branch calls before navigation");
    DerivP c = navigate(j, {Step{t_empty()}});
    if (!c) out.fail("navigation failed");
    if (branch_calls() == 0) out.fail("counter did not move on navigation");
    if (out.pass) out.detail = "0 calls before navigation, " + std::to_string(branch_calls()) + " after one step";
    return out;
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        std::function<Outcome()> run;
    };
    std::vector<Criterion> all = {
        {1, "ordinal oracle equivalence", oracle_equivalence},
        {2, "well-order and natural sum laws", well_order},
        {3, "e-tower lemma", e_tower_lemma},
        {4, "rank laws", rank_laws},
        {5, "transformer contracts", transformer_contracts},
        {6, "embedding bounds", embedding_bounds},
        {7, "end-to-end reflection", reflection},
        {8, "laziness", laziness},
    };
    int failed = 0;
    for (const auto& c : all) {
        auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.fail(std::string("exception: ") + e.what());
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << c.id << " (" << c.name << "): " << o.detail;
        if (o.failures > 1) std::cout << " [+" << o.failures - 1 << " more]";
        std::cout << " [" << std::fixed;
        std::cout.precision(1);
        std::cout << secs << "s]" << std::endl;
        failed += !o.pass;
    }
    return failed == 0 ? 0 : 1;
}
