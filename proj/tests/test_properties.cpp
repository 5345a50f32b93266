#include <doctest.h>

#include <functional>
#include <random>

#include "gen.hpp"
#include "kpref/embed.hpp"
#include "kpref/pipeline.hpp"
#include "oracle.hpp"

using namespace kpref;

namespace {

OrdNotation N(std::uint64_t n) { return OrdNotation::nat(n); }

// A random notation strictly below a, or zero.
OrdNotation descend(const OrdNotation& a, std::mt19937_64& rng) {
    using K = OrdNotation::Kind;
    auto coin = [&] { return std::uniform_int_distribution<int>(0, 1)(rng) == 1; };
    if (a.is_zero()) return a;
    switch (a.kind()) {
    case K::Nat: return N(std::uniform_int_distribution<std::uint64_t>(0, a.nat_value() - 1)(rng));
    case K::Omega: return coin() ? N(3) : oracle::random_plain(rng, 2);
    case K::Pow: {
        if (a.arg().is_zero()) return N(0);
        OrdNotation e = descend(a.arg(), rng);
        return coin() ? OrdNotation::pow(e) : OrdNotation::sum({OrdNotation::pow(e), OrdNotation::pow(e)});
    }
    case K::Eps: {
        if (ord_eq(a, OrdNotation::omega())) return descend(OrdNotation::omega(), rng);
        if (a.arg().is_zero()) return phi0_iterate(std::uniform_int_distribution<int>(1, 4)(rng), N(1));
        return OrdNotation::pow(OrdNotation::eps(descend(a.arg(), rng)));
    }
    case K::Sum: {
        OrdNotation c = normalize_cnf(a);
        std::vector<OrdNotation> parts = c.parts();
        if (coin()) parts.pop_back();
        else parts.back() = descend(parts.back(), rng);
        return OrdNotation::sum(parts);
    }
    }
    return N(0);
}

}  // namespace

TEST_CASE("ordinals: compare is a total order (sampled)") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 2000; ++i) {
        auto a = oracle::random_full(rng, 3), b = oracle::random_full(rng, 3), c = oracle::random_full(rng, 3);
        int ab = cmp_sign(a, b), ba = cmp_sign(b, a);
        CHECK(ab == -ba);
        CHECK(cmp_sign(a, a) == 0);
        if (ab < 0 && cmp_sign(b, c) < 0) CHECK(cmp_sign(a, c) < 0);
        if (ab == 0 && cmp_sign(b, c) == 0) CHECK(cmp_sign(a, c) == 0);
    }
}

TEST_CASE("ordinals: oracle agreement on small notations") {
    std::vector<std::vector<OrdNotation>> memo;
    std::vector<OrdNotation> all;
    for (std::size_t s = 1; s <= 5; ++s)
        for (auto& a : oracle::enumerate_size(s, 2, memo)) all.push_back(a);
    std::vector<oracle::Cnf> vals;
    for (auto& a : all) vals.push_back(oracle::eval(a));
    for (std::size_t i = 0; i < all.size(); ++i)
        for (std::size_t j = 0; j < all.size(); ++j) {
            int want = oracle::cmp(vals[i], vals[j]);
            if (cmp_sign(all[i], all[j]) != want) {
                FAIL_CHECK(all[i].str() << " vs " << all[j].str());
                return;
            }
        }
}

TEST_CASE("ordinals: natural sum laws") {
    std::mt19937_64 rng(12);
    for (int i = 0; i < 1000; ++i) {
        auto a = oracle::random_full(rng, 3), b = oracle::random_full(rng, 3), c = oracle::random_full(rng, 3);
        CHECK(ord_eq(natural_sum(a, b), natural_sum(b, a)));
        CHECK(ord_eq(natural_sum(natural_sum(a, b), c), natural_sum(a, natural_sum(b, c))));
        CHECK(cmp_sign(natural_sum(a, b), natural_sum(a, c)) == cmp_sign(b, c));
        int s = cmp_sign(natural_sum(a, b), a);
        CHECK(s >= 0);
        CHECK((s == 0) == b.is_zero());
        if (!a.contains_omega() && !b.contains_omega()) {
            try {
                auto h = oracle::hsum(oracle::eval(a), oracle::eval(b));
                CHECK(oracle::cmp(oracle::eval(natural_sum(a, b)), h) == 0);
            } catch (const std::invalid_argument&) {
            }
        }
    }
}

TEST_CASE("ordinals: normalize_cnf is idempotent and value preserving") {
    std::mt19937_64 rng(13);
    for (int i = 0; i < 1000; ++i) {
        auto a = oracle::random_full(rng, 3);
        auto n = normalize_cnf(a);
        CHECK(ord_eq(a, n));
        CHECK(normalize_cnf(n).identical(n));
        auto ex = cnf_exponents(n);
        for (std::size_t k = 1; k < ex.size(); ++k) CHECK(cmp_sign(ex[k - 1], ex[k]) >= 0);
    }
}

TEST_CASE("ordinals: e-tower is increasing") {
    for (std::uint64_t n = 0; n < 10; ++n) {
        CHECK(ord_lt(e_tower(n), e_tower(n + 1)));
        CHECK(ord_lt(e_tower(n), OrdNotation::eps(omega_plus(1))));
    }
}

TEST_CASE("ordinals: no long descent") {
    std::mt19937_64 rng(14);
    for (int walk = 0; walk < 300; ++walk) {
        OrdNotation a = oracle::random_full(rng, 3);
        std::size_t steps = 0;
        while (!a.is_zero() && steps < 100000) {
            OrdNotation b = descend(a, rng);
            if (!ord_lt(b, a)) {
                FAIL_CHECK(b.str() << " is not below " << a.str());
                break;
            }
            a = b;
            ++steps;
        }
        CHECK(a.is_zero());
    }
}

TEST_CASE("sets: ev_term agrees with the naive evaluator") {
    std::vector<TermP> terms;
    for (const auto& s : v_level(3)) terms.push_back(t_const(s));
    std::vector<TermP> level = terms;
    for (int depth = 1; depth <= 2; ++depth) {
        std::vector<TermP> next;
        for (const auto& a : level) {
            next.push_back(t_union(a));
            for (const auto& b : level) next.push_back(t_pair(a, b));
        }
        for (auto& t : next) terms.push_back(t);
        level = terms;
    }
    std::mt19937_64 rng(15);
    for (int i = 0; i < 3000; ++i) {
        auto pick = [&] { return terms[std::uniform_int_distribution<std::size_t>(0, terms.size() - 1)(rng)]; };
        terms.push_back(std::uniform_int_distribution<int>(0, 1)(rng) ? t_pair(pick(), pick()) : t_union(pick()));
    }
    for (const auto& t : terms) {
        auto got = oracle::from_hf(ev_term(t));
        REQUIRE(got == oracle::eval_term(t));
        if (t->kind == Term::Kind::Pair)
            CHECK(oracle::nrank(got) ==
                  std::max(oracle::nrank(oracle::eval_term(t->a)), oracle::nrank(oracle::eval_term(t->b))) + 1);
        if (t->kind == Term::Kind::Union) CHECK(oracle::nrank(got) <= oracle::nrank(oracle::eval_term(t->a)));
    }
}

TEST_CASE("truth: fuel, levels and De Morgan") {
    std::mt19937_64 rng(16);
    Universe u = Universe::make(3, 6), big = Universe::make(3, 12);
    for (int i = 0; i < 1500; ++i) {
        FormP f = gen::closed(rng, 3);
        Truth t = truth_any(f, u);
        CHECK(truth_any(negate(f), u) == truth_not(t));
        if (f->is_delta0()) {
            CHECK(truth_level(f, Level{true, 0}, u) == truth_delta0(f, u));
            if (t != Truth::Unknown) CHECK(truth_delta0(f, big) == t);
        }
        FormP g = gen::closed(rng, 3, gen::Opts{false, false});
        CHECK(truth_delta0(g, u) != Truth::Unknown);
    }
}

TEST_CASE("syntax: rank laws") {
    std::mt19937_64 rng(17);
    const OrdNotation W = OrdNotation::omega();
    auto battery = standard_battery();
    for (int i = 0; i < 1500; ++i) {
        FormP f = gen::closed(rng, 3);
        OrdNotation r = formula_rank(f);
        CHECK(ord_lt(r, W) == f->is_delta0());
        CHECK(ord_eq(formula_rank(negate(f)), r));
        CHECK(show(parse_formula(show(f))) == show(f));
        if (f->is_delta0()) {
            OrdNotation m;
            for (const auto& k : k_of(f)) m = ord_max(m, k);
            CHECK(ord_le(omega_times(m), r));
            CHECK(ord_lt(r, omega_times(ord_succ(m))));
        } else {
            CHECK(ord_le(W, r));
            CHECK(ord_lt(r, OrdNotation::sum({W, OrdNotation::pow(N(1))})));
            if (f->kind == Formula::Kind::And || f->kind == Formula::Kind::Or) {
                for (int j = 0; j < 2; ++j) CHECK(ord_lt(formula_rank(decompose_child(f, j)), r));
            } else if (!is_atomic(f)) {
                for (const auto& s : battery.terms) CHECK(ord_lt(formula_rank(decompose_child(f, s)), r));
            }
        }
    }
}

TEST_CASE("syntax: rank stability") {
    std::mt19937_64 rng(18);
    auto battery = standard_battery();
    for (int i = 0; i < 800; ++i) {
        FormP body = gen::formula(rng, 3, 1);
        OrdNotation base = formula_rank(instantiate(body, t_empty()));
        for (const auto& s : battery.terms) {
            FormP a = instantiate(body, s);
            OrdNotation top;
            for (const auto& k : k_of(a)) top = ord_max(top, k);
            if (ord_lt(set_rank(s), top)) CHECK(ord_eq(formula_rank(a), base));
        }
    }
}

namespace {

// Copy of p with the node at `path` replaced by fn(node).
FinProofP mutate_at(const FinProofP& p, const std::vector<std::size_t>& path, std::size_t depth,
                    const std::function<void(FinProof&)>& fn) {
    auto copy = std::make_shared<FinProof>(*p);
    if (depth == path.size()) fn(*copy);
    else copy->kids[path[depth]] = mutate_at(p->kids[path[depth]], path, depth + 1, fn);
    return copy;
}

void addresses(const FinProofP& p, std::vector<std::size_t>& cur, std::vector<std::vector<std::size_t>>& out) {
    out.push_back(cur);
    for (std::size_t i = 0; i < p->kids.size(); ++i) {
        cur.push_back(i);
        addresses(p->kids[i], cur, out);
        cur.pop_back();
    }
}

std::string fin_path(const std::vector<std::size_t>& path, std::size_t len) {
    if (len == 0) return ".";
    std::string s;
    for (std::size_t i = 0; i < len; ++i) s += (i ? "/" : "") + std::to_string(path[i]);
    return s;
}

}  // namespace

TEST_CASE("kpcalc: single-node mutations are caught at the node or its parent") {
    FormP junk = parse_formula("(mem {} {})");
    for (const auto& e : corpus()) {
        FinProofP p = parse_proof(e.text);
        std::vector<std::vector<std::size_t>> addrs;
        std::vector<std::size_t> cur;
        addresses(p, cur, addrs);
        for (const auto& a : addrs) {
            CAPTURE(e.name);
            CAPTURE(fin_path(a, a.size()));
            FinProofP m = mutate_at(p, a, 0, [&](FinProof& n) { n.side = n.side.with(junk); });
            if (a.empty()) continue;  // extra side formula at the root is still a proof
            auto r = check_fin(*m);
            REQUIRE_FALSE(r.valid());
            bool located = false;
            for (const auto& v : r.violations)
                located |= v.path == fin_path(a, a.size()) || v.path == fin_path(a, a.size() - 1);
            CHECK(located);
        }
    }
}

TEST_CASE("rsderiv: navigation composes") {
    auto battery = battery_by_name("small");
    for (const auto& e : corpus()) {
        DerivP w = embed_proof(parse_proof(e.text), parse_subst(e.subst));
        for (const auto& [i, c] : explore_kids(w, battery)) {
            if (!c) continue;
            for (const auto& [j, d] : explore_kids(c, battery)) {
                DerivP direct = navigate(w, {i, j});
                REQUIRE(direct);
                CHECK(direct->end() == navigate(navigate(w, {i}), {j})->end());
                CHECK(direct->end() == d->end());
            }
        }
    }
}

TEST_CASE("embed: no measure is additive") {
    std::mt19937_64 rng(19);
    for (int i = 0; i < 300; ++i) {
        Sequent g{gen::closed(rng, 2), gen::closed(rng, 2)};
        FormP a = gen::closed(rng, 2);
        if (g.contains(a)) continue;
        CHECK(ord_eq(no(g.with(a)), natural_sum(no(g), no(a))));
    }
}

TEST_CASE("embed: lem leaves are dual pairs or true axioms") {
    std::mt19937_64 rng(20);
    auto battery = battery_by_name("small");
    Universe u = Universe::make(4, 8);
    for (int i = 0; i < 60; ++i) {
        FormP f = gen::closed(rng, 3, gen::Opts{true, false});
        std::function<void(const DerivP&, int)> go = [&](const DerivP& w, int d) {
            if (w->rule == Rule::Axiom) {
                bool dual = false, truth = false;
                for (const auto& x : w->side.items()) {
                    dual |= w->side.contains(negate(x));
                    truth |= x->is_delta0() && truth_delta0(x, u) == Truth::True;
                }
                CHECK((dual || truth));
                return;
            }
            if (d == 0) return;
            for (const auto& [idx, c] : explore_kids(w, battery)) go(c, d - 1);
        };
        go(lem(f), 4);
    }
}

TEST_CASE("transforms: laziness") {
    for (const auto& e : corpus()) {
        if (e.k == 0) continue;
        reset_branch_calls();
        DerivP w = embed_proof(parse_proof(e.text), parse_subst(e.subst));
        DerivP v = wkn(Sequent{parse_formula("(mem {} {})")}, w);
        DerivP up = with_bounds(v, v->length, omega_plus(3));
        DerivP j = cut_elim(up);
        CHECK(branch_calls() == 0);
        (void)j->end();
        CHECK(branch_calls() == 0);
    }
}

TEST_CASE("pipeline: reports are reproducible") {
    PipelineOptions opt;
    for (const char* name : {"pair", "cut"}) {
        const CorpusEntry* e = nullptr;
        for (const auto& c : corpus())
            if (c.name == name) e = &c;
        REQUIRE(e);
        auto a = reflect_text(e->text, e->subst, opt, name).to_json(false).dump();
        auto b = reflect_text(e->text, e->subst, opt, name).to_json(false).dump();
        CHECK(a == b);
    }
}
