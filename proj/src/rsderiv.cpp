#include "kpref/rsderiv.hpp"

#include <functional>

namespace kpref {

namespace {
std::atomic<std::uint64_t> g_branch_calls{0};
std::atomic<bool> g_branch_cache{false};
}  // namespace

std::uint64_t branch_calls() { return g_branch_calls.load(); }
void reset_branch_calls() { g_branch_calls = 0; }
void set_branch_cache(bool on) { g_branch_cache = on; }
bool branch_cache() { return g_branch_cache.load(); }

std::string rule_str(Rule r) {
    switch (r) {
    case Rule::Axiom: return "Axiom";
    case Rule::And: return "And";
    case Rule::Or0: return "Or0";
    case Rule::Or1: return "Or1";
    case Rule::BAll: return "BAll";
    case Rule::BEx: return "BEx";
    case Rule::All: return "All";
    case Rule::Ex: return "Ex";
    case Rule::Cut: return "Cut";
    case Rule::SigmaRef: return "SigmaRef";
    }
    return "?";
}

LazyKid::LazyKid(DerivP d) : value_(std::move(d)) {
    std::call_once(once_, [] {});
    done_ = true;
}

const DerivP& LazyKid::get() const {
    std::call_once(once_, [this] {
        value_ = fn_();
        done_ = true;
    });
    return value_;
}

bool LazyKid::forced() const { return done_.load(); }

Sequent Derivation::end() const {
    if (rule == Rule::Axiom || rule == Rule::Cut) return side;
    return side.with(principal);
}

std::size_t Derivation::arity() const {
    switch (rule) {
    case Rule::Axiom:
    case Rule::BAll:
    case Rule::All: return 0;
    case Rule::And:
    case Rule::Cut: return 2;
    default: return 1;
    }
}

DerivP Derivation::kid(std::size_t i) const {
    if (i >= kids.size()) return nullptr;
    return kids[i]->get();
}

DerivP Derivation::at(const TermP& s) const {
    if (!branch) return nullptr;
    if (!branch_cache()) {
        ++g_branch_calls;
        return branch(s);
    }
    {
        std::lock_guard<std::mutex> lock(cache_mu);
        auto it = cache.find(s->key);
        if (it != cache.end()) return it->second;
    }
    ++g_branch_calls;
    DerivP d = branch(s);
    std::lock_guard<std::mutex> lock(cache_mu);
    return cache.emplace(s->key, d).first->second;
}

FormP child_minor(const Derivation& w, const Index& i) {
    switch (w.rule) {
    case Rule::Axiom: throw SyntaxError("axiom has no children");
    case Rule::And: return decompose_child(w.principal, i);
    case Rule::Or0: return decompose_child(w.principal, 0);
    case Rule::Or1: return decompose_child(w.principal, 1);
    case Rule::BAll:
    case Rule::All: return decompose_child(w.principal, i);
    case Rule::BEx:
    case Rule::Ex: return decompose_child(w.principal, w.witness);
    case Rule::Cut: {
        const int* n = std::get_if<int>(&i);
        if (!n || *n < 0 || *n > 1) throw SyntaxError("cut child index must be 0 or 1");
        return *n == 0 ? w.principal : negate(w.principal);
    }
    case Rule::SigmaRef: return w.minor;
    }
    throw SyntaxError("bad rule");
}

std::optional<Index> principal_index(const Derivation& w, std::size_t i) {
    switch (w.rule) {
    case Rule::And: return Index(static_cast<int>(i));
    case Rule::Or0: return Index(0);
    case Rule::Or1: return Index(1);
    case Rule::BEx:
    case Rule::Ex: return Index(w.witness);
    default: return std::nullopt;
    }
}

NodeInfo node_info(const Derivation& w) { return {w.rule, w.principal, w.end(), w.length, w.rank}; }

DerivP navigate(const DerivP& w, const std::vector<Step>& path) {
    DerivP cur = w;
    for (const auto& st : path) {
        if (!cur) return nullptr;
        if (const int* n = std::get_if<int>(&st)) {
            if (cur->branching() || *n < 0 || static_cast<std::size_t>(*n) >= cur->kids.size()) return nullptr;
            cur = cur->kid(static_cast<std::size_t>(*n));
        } else {
            const TermP& s = std::get<TermP>(st);
            if (!cur->branching() || !s->closed()) return nullptr;
            cur = cur->at(s);
        }
    }
    return cur;
}

std::string path_str(const std::vector<Step>& path) {
    std::string s;
    for (std::size_t i = 0; i < path.size(); ++i) {
        if (i) s += "/";
        s += index_str(path[i]);
    }
    return s.empty() ? "." : s;
}

std::string quasicode_problem(const Derivation& w) {
    using K = Formula::Kind;
    auto need = [&](bool c, const std::string& m) { return c ? std::string() : m; };
    for (const auto& f : w.side.items())
        if (!f->closed()) return "open formula in sequent: " + show(f);
    if (w.rule != Rule::Axiom) {
        if (!w.principal) return "missing principal formula";
        if (!w.principal->closed()) return "open principal formula";
    }
    std::size_t n = w.kids.size();
    switch (w.rule) {
    case Rule::Axiom: return need(!w.principal && n == 0 && !w.branch, "axiom with children or principal");
    case Rule::And: return need(w.principal->kind == K::And && n == 2, "And node shape");
    case Rule::Or0:
    case Rule::Or1: return need(w.principal->kind == K::Or && n == 1, "Or node shape");
    case Rule::BAll:
        return need(w.principal->kind == K::BAll && n == 0 && w.branch != nullptr, "BAll node shape");
    case Rule::All: return need(w.principal->kind == K::All && n == 0 && w.branch != nullptr, "All node shape");
    case Rule::BEx:
        return need(w.principal->kind == K::BEx && n == 1 && w.witness && w.witness->closed(), "BEx node shape");
    case Rule::Ex:
        return need(w.principal->kind == K::Ex && n == 1 && w.witness && w.witness->closed(), "Ex node shape");
    case Rule::Cut: return need(n == 2, "Cut node shape");
    case Rule::SigmaRef:
        if (n != 1 || !w.minor) return "SigmaRef node shape";
        return need(sigma_ref_formula(w.minor)->key == w.principal->key, "SigmaRef principal is not the reflection");
    }
    return "unknown rule";
}

bool check_quasicode(const Derivation& w) { return quasicode_problem(w).empty(); }

std::vector<std::string> check_local(const Derivation& w, const std::vector<std::pair<Index, DerivP>>& kids,
                                     const Universe& u) {
    std::vector<std::string> out;
    if (auto q = quasicode_problem(w); !q.empty()) {
        out.push_back("not a quasicode: " + q);
        return out;
    }
    if (w.rule == Rule::Axiom) {
        // Unknown (omega sampled out of fuel) is not evidence of a violation.
        bool found = false;
        for (const auto& f : w.side.items()) {
            if (!f->is_delta0()) continue;
            Truth t = truth_delta0(f, u);
            if (t != Truth::False) {
                found = true;
                break;
            }
        }
        if (!found) out.push_back("no true Delta0 formula in axiom " + w.side.str());
        return out;
    }
    if (w.rule == Rule::Cut && !ord_le(ord_succ(formula_rank(w.principal)), w.rank))
        out.push_back("cut rank exceeds bound: rank(" + show(w.principal) + ")+1 > " + w.rank.str());
    if (w.rule == Rule::SigmaRef) {
        if (!ord_lt(OrdNotation::omega(), w.length)) out.push_back("SigmaRef length not above Omega");
        if (!is_sigma(w.minor)) out.push_back("SigmaRef premise is not a Sigma formula");
    }
    for (const auto& [idx, c] : kids) {
        std::string at = "child " + index_str(idx) + ": ";
        if (!c) {
            out.push_back(at + "missing");
            continue;
        }
        Sequent expect = w.side.with(child_minor(w, idx));
        Sequent got = c->end();
        if (got != expect) out.push_back(at + "end sequent mismatch, expected " + expect.str() + " got " + got.str());
        if (!ord_lt(c->length, w.length))
            out.push_back(at + "length not strictly below (" + c->length.str() + " vs " + w.length.str() + ")");
        if (!ord_le(c->rank, w.rank))
            out.push_back(at + "rank not below (" + c->rank.str() + " vs " + w.rank.str() + ")");
    }
    return out;
}

std::vector<std::pair<Index, DerivP>> explore_kids(const DerivP& w, const TermBattery& battery) {
    std::vector<std::pair<Index, DerivP>> out;
    if (w->branching()) {
        for (const auto& s : battery.terms) out.emplace_back(s, w->at(s));
    } else {
        for (std::size_t i = 0; i < w->kids.size(); ++i) out.emplace_back(static_cast<int>(i), w->kid(i));
    }
    return out;
}

WfReport check_wf_bounded(const DerivP& root, const TermBattery& battery, const WfOptions& opt) {
    WfReport rep;
    std::vector<Step> path;
    std::function<void(const DerivP&, std::size_t)> go = [&](const DerivP& w, std::size_t depth) {
        if (rep.violations.size() >= opt.max_violations) return;
        if (rep.visited >= opt.node_budget) {
            rep.truncated = true;
            return;
        }
        ++rep.visited;
        std::vector<std::pair<Index, DerivP>> kids;
        try {
            if (depth < opt.depth) kids = explore_kids(w, battery);
            else if (w->rule != Rule::Axiom) rep.truncated = true;
            for (auto& m : check_local(*w, kids, opt.universe)) rep.violations.push_back({path_str(path), m});
        } catch (const std::exception& e) {
            rep.violations.push_back({path_str(path), std::string("malformed: ") + e.what()});
            return;
        }
        for (const auto& [idx, c] : kids) {
            if (!c) continue;
            path.push_back(idx);
            go(c, depth + 1);
            path.pop_back();
        }
    };
    go(root, 0);
    return rep;
}

DerivP mk_axiom(Sequent s, std::string origin) {
    auto d = std::make_shared<Derivation>();
    d->rule = Rule::Axiom;
    d->side = std::move(s);
    d->origin = std::move(origin);
    return d;
}

DerivP mk_node(Rule rule, FormP principal, Sequent side, OrdNotation length, OrdNotation rank,
               std::vector<std::shared_ptr<LazyKid>> kids, std::string origin) {
    auto d = std::make_shared<Derivation>();
    d->rule = rule;
    d->principal = std::move(principal);
    d->side = std::move(side);
    d->length = std::move(length);
    d->rank = std::move(rank);
    d->kids = std::move(kids);
    d->origin = std::move(origin);
    return d;
}

DerivP mk_branch(Rule rule, FormP principal, Sequent side, OrdNotation length, OrdNotation rank, BranchFn fn,
                 std::string origin) {
    auto d = std::make_shared<Derivation>();
    d->rule = rule;
    d->principal = std::move(principal);
    d->side = std::move(side);
    d->length = std::move(length);
    d->rank = std::move(rank);
    d->branch = std::move(fn);
    d->origin = std::move(origin);
    return d;
}

DerivP mk_witness(Rule rule, FormP principal, TermP witness, Sequent side, OrdNotation length, OrdNotation rank,
                  std::shared_ptr<LazyKid> kid, std::string origin) {
    auto d = std::make_shared<Derivation>();
    d->rule = rule;
    d->principal = std::move(principal);
    d->witness = std::move(witness);
    d->side = std::move(side);
    d->length = std::move(length);
    d->rank = std::move(rank);
    d->kids = {std::move(kid)};
    d->origin = std::move(origin);
    return d;
}

DerivP mk_sigma_ref(FormP reflected, Sequent side, OrdNotation length, OrdNotation rank, std::shared_ptr<LazyKid> kid,
                    std::string origin) {
    auto d = std::make_shared<Derivation>();
    d->rule = Rule::SigmaRef;
    d->principal = sigma_ref_formula(reflected);
    d->minor = std::move(reflected);
    d->side = std::move(side);
    d->length = std::move(length);
    d->rank = std::move(rank);
    d->kids = {std::move(kid)};
    d->origin = std::move(origin);
    return d;
}

std::shared_ptr<LazyKid> lazy(KidFn f) { return std::make_shared<LazyKid>(std::move(f)); }
std::shared_ptr<LazyKid> ready(DerivP d) { return std::make_shared<LazyKid>(std::move(d)); }

DerivP with_bounds(const DerivP& w, OrdNotation length, OrdNotation rank) {
    auto d = std::make_shared<Derivation>();
    d->rule = w->rule;
    d->principal = w->principal;
    d->side = w->side;
    d->length = std::move(length);
    d->rank = std::move(rank);
    d->kids = w->kids;
    d->branch = w->branch;
    d->witness = w->witness;
    d->minor = w->minor;
    d->origin = w->origin;
    return d;
}

TermBattery standard_battery() {
    TermBattery b;
    b.name = "std-v1";
    auto v3 = v_level(3);
    for (const auto& s : v3) b.terms.push_back(t_const(s));
    for (std::size_t i = 0; i < v3.size(); ++i)
        for (std::size_t j = i; j < v3.size(); ++j) b.terms.push_back(t_pair(t_const(v3[i]), t_const(v3[j])));
    for (const auto& s : v3) b.terms.push_back(t_union(t_const(s)));
    b.terms.push_back(t_omega());
    return b;
}

TermBattery battery_by_name(const std::string& name) {
    if (name == "std" || name == "std-v1") return standard_battery();
    if (name == "small") {
        TermBattery b;
        b.name = "small";
        for (const auto& s : v_level(2)) b.terms.push_back(t_const(s));
        return b;
    }
    throw std::invalid_argument("unknown battery: " + name);
}

}  // namespace kpref
