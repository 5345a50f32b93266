#include "kpref/syntax.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>

namespace kpref {

namespace {

unsigned drop_binder(unsigned loose) { return loose == 0 ? 0 : loose - 1; }

std::shared_ptr<Term> new_term(Term::Kind k) {
    auto t = std::make_shared<Term>();
    t->kind = k;
    return t;
}

std::shared_ptr<Formula> new_formula(Formula::Kind k) {
    auto f = std::make_shared<Formula>();
    f->kind = k;
    return f;
}

}  // namespace

TermP t_const(const HFSet& v) {
    auto t = new_term(Term::Kind::Const);
    t->value = v;
    t->key = v.key();
    return t;
}

TermP t_bound(unsigned i) {
    auto t = new_term(Term::Kind::Bound);
    t->index = i;
    t->key = "#" + std::to_string(i);
    t->loose = i + 1;
    return t;
}

TermP t_free(const std::string& name) {
    auto t = new_term(Term::Kind::Free);
    t->name = name;
    t->key = "$" + name;
    t->has_free = true;
    return t;
}

TermP t_pair(TermP a, TermP b) {
    auto t = new_term(Term::Kind::Pair);
    t->key = "(pair " + a->key + " " + b->key + ")";
    t->loose = std::max(a->loose, b->loose);
    t->has_free = a->has_free || b->has_free;
    t->a = std::move(a);
    t->b = std::move(b);
    return t;
}

TermP t_union(TermP a) {
    auto t = new_term(Term::Kind::Union);
    t->key = "(union " + a->key + ")";
    t->loose = a->loose;
    t->has_free = a->has_free;
    t->a = std::move(a);
    return t;
}

TermP t_sep(TermP base, FormP body) {
    if (body->unbounded) throw SyntaxError("comprehension matrix must be Delta0: " + body->key);
    auto t = new_term(Term::Kind::Sep);
    t->key = "(sep " + base->key + " " + body->key + ")";
    t->loose = std::max(base->loose, drop_binder(body->loose));
    t->has_free = base->has_free || body->has_free;
    t->a = std::move(base);
    t->body = std::move(body);
    return t;
}

TermP t_empty() {
    static const TermP e = t_const(HFSet());
    return e;
}

TermP t_omega() {
    static const TermP w = t_const(HFSet::omega());
    return w;
}

namespace {

FormP atom(Formula::Kind k, TermP s, TermP t) {
    auto f = new_formula(k);
    f->key = std::string(k == Formula::Kind::Mem ? "(mem " : "(nmem ") + s->key + " " + t->key + ")";
    f->loose = std::max(s->loose, t->loose);
    f->has_free = s->has_free || t->has_free;
    f->s = std::move(s);
    f->t = std::move(t);
    return f;
}

FormP binary(Formula::Kind k, FormP l, FormP r) {
    auto f = new_formula(k);
    f->key = std::string(k == Formula::Kind::And ? "(and " : "(or ") + l->key + " " + r->key + ")";
    f->loose = std::max(l->loose, r->loose);
    f->has_free = l->has_free || r->has_free;
    f->unbounded = l->unbounded || r->unbounded;
    f->l = std::move(l);
    f->r = std::move(r);
    return f;
}

FormP bounded(Formula::Kind k, TermP t, FormP body) {
    auto f = new_formula(k);
    f->key = std::string(k == Formula::Kind::BAll ? "(ball " : "(bex ") + t->key + " " + body->key + ")";
    f->loose = std::max(t->loose, drop_binder(body->loose));
    f->has_free = t->has_free || body->has_free;
    f->unbounded = body->unbounded;
    f->t = std::move(t);
    f->l = std::move(body);
    return f;
}

FormP unbounded_q(Formula::Kind k, FormP body) {
    auto f = new_formula(k);
    f->key = std::string(k == Formula::Kind::All ? "(all " : "(ex ") + body->key + ")";
    f->loose = drop_binder(body->loose);
    f->has_free = body->has_free;
    f->unbounded = true;
    f->l = std::move(body);
    return f;
}

}  // namespace

FormP f_mem(TermP s, TermP t) { return atom(Formula::Kind::Mem, std::move(s), std::move(t)); }
FormP f_nmem(TermP s, TermP t) { return atom(Formula::Kind::NotMem, std::move(s), std::move(t)); }
FormP f_and(FormP l, FormP r) { return binary(Formula::Kind::And, std::move(l), std::move(r)); }
FormP f_or(FormP l, FormP r) { return binary(Formula::Kind::Or, std::move(l), std::move(r)); }
FormP f_ball(TermP t, FormP body) { return bounded(Formula::Kind::BAll, std::move(t), std::move(body)); }
FormP f_bex(TermP t, FormP body) { return bounded(Formula::Kind::BEx, std::move(t), std::move(body)); }
FormP f_all(FormP body) { return unbounded_q(Formula::Kind::All, std::move(body)); }
FormP f_ex(FormP body) { return unbounded_q(Formula::Kind::Ex, std::move(body)); }

std::string fresh_name() {
    static std::atomic<std::uint64_t> counter{0};
    return "%v" + std::to_string(counter++);
}

FormP h_ball(const TermP& t, const BodyFn& body) {
    auto n = fresh_name();
    return f_ball(t, abstract(body(t_free(n)), n));
}
FormP h_bex(const TermP& t, const BodyFn& body) {
    auto n = fresh_name();
    return f_bex(t, abstract(body(t_free(n)), n));
}
FormP h_all(const BodyFn& body) {
    auto n = fresh_name();
    return f_all(abstract(body(t_free(n)), n));
}
FormP h_ex(const BodyFn& body) {
    auto n = fresh_name();
    return f_ex(abstract(body(t_free(n)), n));
}
TermP h_sep(const TermP& base, const BodyFn& body) {
    auto n = fresh_name();
    return t_sep(base, abstract(body(t_free(n)), n));
}

FormP f_eq(const TermP& s, const TermP& t) {
    return f_and(h_ball(s, [&](const TermP& x) { return f_mem(x, t); }),
                 h_ball(t, [&](const TermP& x) { return f_mem(x, s); }));
}

FormP f_neq(const TermP& s, const TermP& t) { return negate(f_eq(s, t)); }

FormP f_imp(const FormP& a, const FormP& b) { return f_or(negate(a), b); }

FormP negate(const FormP& f) {
    using K = Formula::Kind;
    switch (f->kind) {
    case K::Mem: return f_nmem(f->s, f->t);
    case K::NotMem: return f_mem(f->s, f->t);
    case K::And: return f_or(negate(f->l), negate(f->r));
    case K::Or: return f_and(negate(f->l), negate(f->r));
    case K::BAll: return f_bex(f->t, negate(f->l));
    case K::BEx: return f_ball(f->t, negate(f->l));
    case K::All: return f_ex(negate(f->l));
    case K::Ex: return f_all(negate(f->l));
    }
    return f;
}

// Generic structural map over terms and formulas, tracking binder depth.
namespace {

struct TermMap {
    // Returns nullptr to recurse structurally.
    std::function<TermP(const TermP&, unsigned)> leaf;
    // Skip subtrees where this returns true.
    std::function<bool(const Term&, unsigned)> skip_term;
    std::function<bool(const Formula&, unsigned)> skip_formula;

    TermP term(const TermP& t, unsigned d) const {
        if (skip_term(*t, d)) return t;
        if (auto r = leaf(t, d)) return r;
        switch (t->kind) {
        case Term::Kind::Const:
        case Term::Kind::Bound:
        case Term::Kind::Free: return t;
        case Term::Kind::Pair: {
            auto a = term(t->a, d), b = term(t->b, d);
            return a == t->a && b == t->b ? t : t_pair(a, b);
        }
        case Term::Kind::Union: {
            auto a = term(t->a, d);
            return a == t->a ? t : t_union(a);
        }
        case Term::Kind::Sep: {
            auto a = term(t->a, d);
            auto b = formula(t->body, d + 1);
            return a == t->a && b == t->body ? t : t_sep(a, b);
        }
        }
        return t;
    }

    FormP formula(const FormP& f, unsigned d) const {
        if (skip_formula(*f, d)) return f;
        using K = Formula::Kind;
        switch (f->kind) {
        case K::Mem:
        case K::NotMem: {
            auto s = term(f->s, d), t = term(f->t, d);
            if (s == f->s && t == f->t) return f;
            return f->kind == K::Mem ? f_mem(s, t) : f_nmem(s, t);
        }
        case K::And:
        case K::Or: {
            auto l = formula(f->l, d), r = formula(f->r, d);
            if (l == f->l && r == f->r) return f;
            return f->kind == K::And ? f_and(l, r) : f_or(l, r);
        }
        case K::BAll:
        case K::BEx: {
            auto t = term(f->t, d);
            auto b = formula(f->l, d + 1);
            if (t == f->t && b == f->l) return f;
            return f->kind == K::BAll ? f_ball(t, b) : f_bex(t, b);
        }
        case K::All:
        case K::Ex: {
            auto b = formula(f->l, d + 1);
            if (b == f->l) return f;
            return f->kind == K::All ? f_all(b) : f_ex(b);
        }
        }
        return f;
    }
};

TermMap instantiate_map(const TermP& term) {
    TermMap m;
    m.skip_term = [](const Term& t, unsigned d) { return t.loose <= d; };
    m.skip_formula = [](const Formula& f, unsigned d) { return f.loose <= d; };
    m.leaf = [term](const TermP& t, unsigned d) -> TermP {
        if (t->kind != Term::Kind::Bound) return nullptr;
        if (t->index == d) return term;
        if (t->index > d) return t_bound(t->index - 1);
        return t;
    };
    return m;
}

}  // namespace

FormP instantiate(const FormP& body, const TermP& term) {
    if (term->loose) throw SyntaxError("instantiating with a term that has loose bound variables");
    return instantiate_map(term).formula(body, 0);
}

TermP instantiate_term(const TermP& body, const TermP& term) {
    if (term->loose) throw SyntaxError("instantiating with a term that has loose bound variables");
    return instantiate_map(term).term(body, 0);
}

FormP abstract(const FormP& f, const std::string& name) {
    TermMap m;
    m.skip_term = [](const Term& t, unsigned d) { return !t.has_free && t.loose <= d; };
    m.skip_formula = [](const Formula& f2, unsigned d) { return !f2.has_free && f2.loose <= d; };
    m.leaf = [&name](const TermP& t, unsigned d) -> TermP {
        if (t->kind == Term::Kind::Free) return t->name == name ? t_bound(d) : t;
        if (t->kind == Term::Kind::Bound) return t->index >= d ? t_bound(t->index + 1) : t;
        return nullptr;
    };
    return m.formula(f, 0);
}

namespace {

TermMap subst_map(const std::map<std::string, TermP>& sigma) {
    for (const auto& [n, t] : sigma)
        if (t->loose) throw SyntaxError("substituting a term with loose bound variables for " + n);
    TermMap m;
    m.skip_term = [](const Term& t, unsigned) { return !t.has_free; };
    m.skip_formula = [](const Formula& f, unsigned) { return !f.has_free; };
    m.leaf = [&sigma](const TermP& t, unsigned) -> TermP {
        if (t->kind != Term::Kind::Free) return nullptr;
        auto it = sigma.find(t->name);
        return it == sigma.end() ? t : it->second;
    };
    return m;
}

}  // namespace

FormP substitute(const FormP& f, const std::map<std::string, TermP>& sigma) {
    if (sigma.empty()) return f;
    return subst_map(sigma).formula(f, 0);
}

TermP substitute_term(const TermP& t, const std::map<std::string, TermP>& sigma) {
    if (sigma.empty()) return t;
    return subst_map(sigma).term(t, 0);
}

FormP substitute_free(const FormP& f, const std::string& name, const TermP& term) {
    return substitute(f, {{name, term}});
}

void free_vars_term(const TermP& t, std::set<std::string>& out) {
    if (!t->has_free) return;
    switch (t->kind) {
    case Term::Kind::Free: out.insert(t->name); break;
    case Term::Kind::Pair:
        free_vars_term(t->a, out);
        free_vars_term(t->b, out);
        break;
    case Term::Kind::Union: free_vars_term(t->a, out); break;
    case Term::Kind::Sep:
        free_vars_term(t->a, out);
        free_vars(t->body, out);
        break;
    default: break;
    }
}

void free_vars(const FormP& f, std::set<std::string>& out) {
    if (!f->has_free) return;
    if (f->s) free_vars_term(f->s, out);
    if (f->t) free_vars_term(f->t, out);
    if (f->l) free_vars(f->l, out);
    if (f->r) free_vars(f->r, out);
}

bool occurs_free(const FormP& f, const std::string& name) {
    std::set<std::string> vs;
    free_vars(f, vs);
    return vs.count(name) > 0;
}

namespace {

FormP relativize_with(const FormP& f, const std::function<TermP(unsigned)>& bound, unsigned d) {
    using K = Formula::Kind;
    if (!f->unbounded) return f;
    switch (f->kind) {
    case K::And: return f_and(relativize_with(f->l, bound, d), relativize_with(f->r, bound, d));
    case K::Or: return f_or(relativize_with(f->l, bound, d), relativize_with(f->r, bound, d));
    case K::BAll: return f_ball(f->t, relativize_with(f->l, bound, d + 1));
    case K::BEx: return f_bex(f->t, relativize_with(f->l, bound, d + 1));
    case K::All: return f_ball(bound(d), relativize_with(f->l, bound, d + 1));
    case K::Ex: return f_bex(bound(d), relativize_with(f->l, bound, d + 1));
    default: return f;
    }
}

}  // namespace

FormP relativize(const FormP& f, const TermP& bound) {
    if (bound->loose) throw SyntaxError("relativizing to an open term");
    return relativize_with(f, [&](unsigned) { return bound; }, 0);
}

FormP sigma_ref_formula(const FormP& a) {
    if (a->loose) throw SyntaxError("reflection of a formula with loose bound variables");
    // The new outermost binder sits d binders above a position at depth d.
    return f_ex(relativize_with(a, [](unsigned d) { return t_bound(d); }, 0));
}

bool is_sigma(const FormP& f) {
    using K = Formula::Kind;
    switch (f->kind) {
    case K::All: return false;
    case K::Mem:
    case K::NotMem: return true;
    case K::And:
    case K::Or: return is_sigma(f->l) && is_sigma(f->r);
    default: return is_sigma(f->l);
    }
}

bool is_pi(const FormP& f) { return is_sigma(negate(f)); }

Complexity complexity(const FormP& f) {
    using K = Formula::Kind;
    if (!f->unbounded) return {0, 0};
    switch (f->kind) {
    case K::And:
    case K::Or: {
        auto a = complexity(f->l), b = complexity(f->r);
        return {std::max(a.sigma, b.sigma), std::max(a.pi, b.pi)};
    }
    case K::BAll:
    case K::BEx: return complexity(f->l);
    case K::Ex: {
        auto b = complexity(f->l);
        unsigned s = std::max(1u, std::min(b.sigma, b.pi + 1));
        return {s, s + 1};
    }
    case K::All: {
        auto b = complexity(f->l);
        unsigned p = std::max(1u, std::min(b.pi, b.sigma + 1));
        return {p + 1, p};
    }
    default: return {0, 0};
    }
}

bool is_conjunctive(const FormP& f) {
    using K = Formula::Kind;
    return f->kind == K::And || f->kind == K::BAll || f->kind == K::All;
}

bool is_disjunctive(const FormP& f) {
    using K = Formula::Kind;
    return f->kind == K::Or || f->kind == K::BEx || f->kind == K::Ex;
}

bool is_atomic(const FormP& f) { return f->kind == Formula::Kind::Mem || f->kind == Formula::Kind::NotMem; }

bool term_indexed(const FormP& f) { return !is_atomic(f) && f->kind != Formula::Kind::And && f->kind != Formula::Kind::Or; }

FormP decompose_child(const FormP& f, const Index& i) {
    using K = Formula::Kind;
    if (is_atomic(f)) throw SyntaxError("atomic formula has no components");
    if (!term_indexed(f)) {
        const int* n = std::get_if<int>(&i);
        if (!n || (*n != 0 && *n != 1)) throw SyntaxError("binary formula needs index 0 or 1");
        return *n == 0 ? f->l : f->r;
    }
    const TermP* s = std::get_if<TermP>(&i);
    if (!s) throw SyntaxError("quantified formula needs a term index");
    FormP inst = instantiate(f->l, *s);
    switch (f->kind) {
    case K::BAll: return f_or(f_nmem(*s, f->t), inst);
    case K::BEx: return f_and(f_mem(*s, f->t), inst);
    default: return inst;
    }
}

std::string index_str(const Index& i) {
    if (const int* n = std::get_if<int>(&i)) return std::to_string(*n);
    return show(std::get<TermP>(i));
}

OrdNotation set_rank(const TermP& t) { return hf_rank(ev_term(t)); }

OrdNotation term_rank(const TermP& t) { return omega_times(set_rank(t)); }

OrdNotation formula_rank(const FormP& f) {
    if (!f->closed()) throw SyntaxError("rank of an open formula: " + show(f));
    std::call_once(f->rank_once, [&] {
        using K = Formula::Kind;
        OrdNotation r;
        switch (f->kind) {
        case K::Mem:
        case K::NotMem: r = ord_succ(ord_max(term_rank(f->s), term_rank(f->t))); break;
        case K::And:
        case K::Or: r = ord_succ(ord_max(formula_rank(f->l), formula_rank(f->r))); break;
        case K::BAll:
        case K::BEx:
            r = ord_max(ord_add_nat(term_rank(f->t), 3), ord_add_nat(formula_rank(instantiate(f->l, t_empty())), 2));
            break;
        case K::All:
        case K::Ex: r = ord_max(OrdNotation::omega(), ord_succ(formula_rank(instantiate(f->l, t_empty())))); break;
        }
        f->rank_cache = r;
    });
    return *f->rank_cache;
}

namespace {

void collect_terms(const FormP& f, std::vector<TermP>& out) {
    if (f->s && f->s->closed()) out.push_back(f->s);
    if (f->t && f->t->closed()) out.push_back(f->t);
    if (f->l) collect_terms(f->l, out);
    if (f->r) collect_terms(f->r, out);
}

}  // namespace

std::vector<OrdNotation> k_of(const FormP& f) {
    std::vector<TermP> terms;
    collect_terms(f, terms);
    std::vector<OrdNotation> out;
    auto add = [&](const OrdNotation& o) {
        for (const auto& x : out)
            if (ord_eq(x, o)) return;
        out.push_back(o);
    };
    for (const auto& t : terms) add(set_rank(t));
    if (f->unbounded) add(OrdNotation::omega());
    std::sort(out.begin(), out.end(), [](const OrdNotation& a, const OrdNotation& b) { return ord_lt(a, b); });
    return out;
}

// Sequent

namespace {

bool key_less(const FormP& a, const FormP& b) { return a->key < b->key; }

}  // namespace

Sequent::Sequent(std::initializer_list<FormP> fs) : Sequent(std::vector<FormP>(fs)) {}

Sequent::Sequent(const std::vector<FormP>& fs) : items_(fs) {
    std::sort(items_.begin(), items_.end(), key_less);
    items_.erase(std::unique(items_.begin(), items_.end(), [](const FormP& a, const FormP& b) { return a->key == b->key; }),
                 items_.end());
}

bool Sequent::contains(const FormP& f) const {
    auto it = std::lower_bound(items_.begin(), items_.end(), f, key_less);
    return it != items_.end() && (*it)->key == f->key;
}

Sequent Sequent::with(const FormP& f) const {
    if (contains(f)) return *this;
    Sequent s = *this;
    s.items_.insert(std::lower_bound(s.items_.begin(), s.items_.end(), f, key_less), f);
    return s;
}

Sequent Sequent::without(const FormP& f) const {
    Sequent s;
    for (const auto& x : items_)
        if (x->key != f->key) s.items_.push_back(x);
    return s;
}

Sequent Sequent::merged(const Sequent& o) const {
    std::vector<FormP> all = items_;
    all.insert(all.end(), o.items_.begin(), o.items_.end());
    return Sequent(all);
}

Sequent Sequent::minus(const Sequent& o) const {
    Sequent s;
    for (const auto& x : items_)
        if (!o.contains(x)) s.items_.push_back(x);
    return s;
}

bool Sequent::subset_of(const Sequent& o) const {
    for (const auto& x : items_)
        if (!o.contains(x)) return false;
    return true;
}

bool Sequent::operator==(const Sequent& o) const {
    if (items_.size() != o.items_.size()) return false;
    for (std::size_t i = 0; i < items_.size(); ++i)
        if (items_[i]->key != o.items_[i]->key) return false;
    return true;
}

std::string Sequent::str() const {
    std::string s = "(seq";
    for (const auto& f : items_) s += " " + show(f);
    return s + ")";
}

// Printing

namespace {

std::string var_name(unsigned level) { return "x" + std::to_string(level); }

std::string show_t(const TermP& t, unsigned depth);

std::string show_f(const FormP& f, unsigned depth) {
    using K = Formula::Kind;
    switch (f->kind) {
    case K::Mem: return "(mem " + show_t(f->s, depth) + " " + show_t(f->t, depth) + ")";
    case K::NotMem: return "(nmem " + show_t(f->s, depth) + " " + show_t(f->t, depth) + ")";
    case K::And: return "(and " + show_f(f->l, depth) + " " + show_f(f->r, depth) + ")";
    case K::Or: return "(or " + show_f(f->l, depth) + " " + show_f(f->r, depth) + ")";
    case K::BAll:
    case K::BEx:
        return std::string(f->kind == K::BAll ? "(ball " : "(bex ") + var_name(depth) + " " + show_t(f->t, depth) + " " +
               show_f(f->l, depth + 1) + ")";
    case K::All:
    case K::Ex:
        return std::string(f->kind == K::All ? "(all " : "(ex ") + var_name(depth) + " " + show_f(f->l, depth + 1) + ")";
    }
    return "?";
}

std::string show_t(const TermP& t, unsigned depth) {
    switch (t->kind) {
    case Term::Kind::Const: return t->value.key();
    case Term::Kind::Bound:
        if (t->index >= depth) return "#" + std::to_string(t->index - depth);
        return var_name(depth - 1 - t->index);
    case Term::Kind::Free: return t->name;
    case Term::Kind::Pair: return "(pair " + show_t(t->a, depth) + " " + show_t(t->b, depth) + ")";
    case Term::Kind::Union: return "(union " + show_t(t->a, depth) + ")";
    case Term::Kind::Sep:
        return "(sep " + var_name(depth) + " " + show_t(t->a, depth) + " " + show_f(t->body, depth + 1) + ")";
    }
    return "?";
}

}  // namespace

std::string show(const FormP& f) { return show_f(f, 0); }
std::string show(const TermP& t) { return show_t(t, 0); }

// Reading

namespace {

struct Reader {
    const std::string& s;
    std::size_t i = 0;

    [[noreturn]] void fail(const std::string& m) const {
        throw SyntaxError("syntax error at offset " + std::to_string(i) + ": " + m);
    }
    void skip() {
        for (;;) {
            while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
            if (i < s.size() && s[i] == ';') {
                while (i < s.size() && s[i] != '\n') ++i;
                continue;
            }
            return;
        }
    }
    SExpr read() {
        skip();
        if (i >= s.size()) fail("unexpected end of input");
        SExpr e;
        e.offset = i;
        if (s[i] == '(') {
            ++i;
            e.atom = false;
            for (;;) {
                skip();
                if (i >= s.size()) fail("unclosed '('");
                if (s[i] == ')') {
                    ++i;
                    return e;
                }
                e.list.push_back(read());
            }
        }
        if (s[i] == ')') fail("unexpected ')'");
        if (s[i] == '{') {
            int depth = 0;
            std::size_t start = i;
            do {
                if (s[i] == '{') ++depth;
                if (s[i] == '}') --depth;
                ++i;
            } while (i < s.size() && depth > 0);
            if (depth) fail("unbalanced '{'");
            std::string raw = s.substr(start, i - start), lit;
            for (char c : raw)
                if (!std::isspace(static_cast<unsigned char>(c))) lit += c;
            e.text = lit;
            return e;
        }
        std::size_t start = i;
        while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i])) && s[i] != '(' && s[i] != ')' && s[i] != ';')
            ++i;
        e.text = s.substr(start, i - start);
        return e;
    }
};

[[noreturn]] void bad(const SExpr& e, const std::string& m) {
    throw SyntaxError("syntax error at offset " + std::to_string(e.offset) + ": " + m);
}

bool reserved_name(const std::string& n) {
    if (n.size() < 2 || n[0] != 'x') return false;
    return std::all_of(n.begin() + 1, n.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

bool valid_name(const std::string& n) {
    if (n.empty() || !(std::isalpha(static_cast<unsigned char>(n[0])) || n[0] == '_')) return false;
    return std::all_of(n.begin(), n.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'' || c == '-';
    });
}

const std::string& head(const SExpr& e) {
    if (e.atom || e.list.empty() || !e.list[0].atom) bad(e, "expected a keyword list");
    return e.list[0].text;
}

void arity(const SExpr& e, std::size_t n) {
    if (e.list.size() != n + 1) bad(e, "'" + e.list[0].text + "' expects " + std::to_string(n) + " arguments");
}

const std::string& binder_name(const SExpr& e) {
    if (!e.atom || !valid_name(e.text) || e.text == "omega") bad(e, "expected a variable name");
    return e.text;
}

}  // namespace

SExpr read_sexpr(const std::string& text) {
    Reader r{text};
    SExpr e = r.read();
    r.skip();
    if (r.i != text.size()) r.fail("trailing input");
    return e;
}

std::vector<SExpr> read_sexprs(const std::string& text) {
    Reader r{text};
    std::vector<SExpr> out;
    for (;;) {
        r.skip();
        if (r.i >= text.size()) return out;
        out.push_back(r.read());
    }
}

TermP term_from_sexpr(const SExpr& e, std::vector<std::string>& scope) {
    if (e.atom) {
        if (!e.text.empty() && e.text[0] == '{') {
            try {
                return t_const(parse_set(e.text));
            } catch (const std::exception& ex) {
                bad(e, ex.what());
            }
        }
        if (e.text == "omega") return t_omega();
        for (std::size_t k = scope.size(); k-- > 0;)
            if (scope[k] == e.text) return t_bound(static_cast<unsigned>(scope.size() - 1 - k));
        if (!valid_name(e.text)) bad(e, "bad term '" + e.text + "'");
        if (reserved_name(e.text)) bad(e, "free variable name '" + e.text + "' is reserved for bound variables");
        return t_free(e.text);
    }
    const std::string& h = head(e);
    if (h == "pair") {
        arity(e, 2);
        return t_pair(term_from_sexpr(e.list[1], scope), term_from_sexpr(e.list[2], scope));
    }
    if (h == "union") {
        arity(e, 1);
        return t_union(term_from_sexpr(e.list[1], scope));
    }
    if (h == "sep") {
        arity(e, 3);
        const std::string& x = binder_name(e.list[1]);
        TermP base = term_from_sexpr(e.list[2], scope);
        scope.push_back(x);
        FormP body = formula_from_sexpr(e.list[3], scope);
        scope.pop_back();
        try {
            return t_sep(base, body);
        } catch (const SyntaxError& ex) {
            bad(e, ex.what());
        }
    }
    bad(e, "unknown term former '" + h + "'");
}

FormP formula_from_sexpr(const SExpr& e, std::vector<std::string>& scope) {
    const std::string& h = head(e);
    auto term = [&](std::size_t k) { return term_from_sexpr(e.list[k], scope); };
    auto form = [&](std::size_t k) { return formula_from_sexpr(e.list[k], scope); };
    if (h == "mem" || h == "nmem" || h == "eq" || h == "neq") {
        arity(e, 2);
        TermP s = term(1), t = term(2);
        if (h == "mem") return f_mem(s, t);
        if (h == "nmem") return f_nmem(s, t);
        return h == "eq" ? f_eq(s, t) : f_neq(s, t);
    }
    if (h == "and" || h == "or") {
        if (e.list.size() < 3) bad(e, "'" + h + "' expects at least 2 arguments");
        FormP acc = form(e.list.size() - 1);
        for (std::size_t k = e.list.size() - 1; k-- > 1;) acc = h == "and" ? f_and(form(k), acc) : f_or(form(k), acc);
        return acc;
    }
    if (h == "imp") {
        arity(e, 2);
        return f_imp(form(1), form(2));
    }
    if (h == "not") {
        arity(e, 1);
        return negate(form(1));
    }
    if (h == "ball" || h == "bex") {
        arity(e, 3);
        const std::string& x = binder_name(e.list[1]);
        TermP t = term(2);
        scope.push_back(x);
        FormP body = form(3);
        scope.pop_back();
        return h == "ball" ? f_ball(t, body) : f_bex(t, body);
    }
    if (h == "all" || h == "ex" || h == "forall" || h == "exists") {
        arity(e, 2);
        const std::string& x = binder_name(e.list[1]);
        scope.push_back(x);
        FormP body = form(2);
        scope.pop_back();
        return h == "all" || h == "forall" ? f_all(body) : f_ex(body);
    }
    bad(e, "unknown formula former '" + h + "'");
}

FormP parse_formula(const std::string& text) {
    std::vector<std::string> scope;
    return formula_from_sexpr(read_sexpr(text), scope);
}

TermP parse_term(const std::string& text) {
    std::vector<std::string> scope;
    return term_from_sexpr(read_sexpr(text), scope);
}

Sequent parse_sequent(const std::string& text) {
    SExpr e = read_sexpr(text);
    if (head(e) != "seq") bad(e, "expected (seq ...)");
    std::vector<FormP> fs;
    std::vector<std::string> scope;
    for (std::size_t k = 1; k < e.list.size(); ++k) fs.push_back(formula_from_sexpr(e.list[k], scope));
    return Sequent(fs);
}

}  // namespace kpref
