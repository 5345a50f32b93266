#include "kpref/truth.hpp"

namespace kpref {

std::string truth_str(Truth t) {
    switch (t) {
    case Truth::True: return "true";
    case Truth::False: return "false";
    default: return "unknown";
    }
}

Truth truth_not(Truth t) {
    if (t == Truth::True) return Truth::False;
    if (t == Truth::False) return Truth::True;
    return t;
}

Truth truth_and(Truth a, Truth b) {
    if (a == Truth::False || b == Truth::False) return Truth::False;
    if (a == Truth::True && b == Truth::True) return Truth::True;
    return Truth::Unknown;
}

Truth truth_or(Truth a, Truth b) { return truth_not(truth_and(truth_not(a), truth_not(b))); }

std::string level_str(Level l) {
    if (l.n == 0) return "Delta0";
    return std::string(l.sigma ? "Sigma" : "Pi") + std::to_string(l.n);
}

bool within_level(const FormP& f, Level l) {
    auto c = complexity(f);
    return (l.sigma ? c.sigma : c.pi) <= l.n;
}

Level classify(const FormP& f) {
    auto c = complexity(f);
    if (c.pi <= c.sigma) return {false, c.pi};
    return {true, c.sigma};
}

namespace {

Truth eval(const FormP& f, const Universe& u, std::uint64_t fuel);

// Quantifier over the members of a set; conj selects forall.
Truth over_set(const HFSet& dom, const FormP& body, bool conj, const Universe& u, std::uint64_t fuel) {
    Truth acc = conj ? Truth::True : Truth::False;
    auto step = [&](const HFSet& x) {
        Truth v = eval(instantiate(body, t_const(x)), u, fuel);
        acc = conj ? truth_and(acc, v) : truth_or(acc, v);
        return acc == (conj ? Truth::False : Truth::True);
    };
    if (dom.is_omega()) {
        for (std::uint64_t n = 0; n < fuel; ++n)
            if (step(HFSet::natural(n))) return acc;
        return Truth::Unknown;
    }
    for (const auto& x : dom.elems())
        if (step(x)) return acc;
    return acc;
}

Truth eval(const FormP& f, const Universe& u, std::uint64_t fuel) {
    using K = Formula::Kind;
    switch (f->kind) {
    case K::Mem:
    case K::NotMem: {
        Truth t;
        try {
            t = ev_term(f->t).contains(ev_term(f->s)) ? Truth::True : Truth::False;
        } catch (const EvalError&) {
            return Truth::Unknown;
        }
        return f->kind == K::Mem ? t : truth_not(t);
    }
    case K::And: {
        Truth a = eval(f->l, u, fuel);
        if (a == Truth::False) return a;
        return truth_and(a, eval(f->r, u, fuel));
    }
    case K::Or: {
        Truth a = eval(f->l, u, fuel);
        if (a == Truth::True) return a;
        return truth_or(a, eval(f->r, u, fuel));
    }
    case K::BAll:
    case K::BEx: {
        HFSet dom;
        try {
            dom = ev_term(f->t);
        } catch (const EvalError&) {
            return Truth::Unknown;
        }
        return over_set(dom, f->l, f->kind == K::BAll, u, fuel);
    }
    case K::All:
    case K::Ex: {
        bool conj = f->kind == K::All;
        Truth acc = conj ? Truth::True : Truth::False;
        for (const auto& x : u.members) {
            Truth v = eval(instantiate(f->l, t_const(x)), u, fuel);
            acc = conj ? truth_and(acc, v) : truth_or(acc, v);
            if (acc == (conj ? Truth::False : Truth::True)) break;
        }
        return acc;
    }
    }
    return Truth::Unknown;
}

void require_closed(const FormP& f) {
    if (!f->closed()) throw SyntaxError("truth of an open formula: " + show(f));
}

}  // namespace

HFSet ev_term(const TermP& t) {
    std::call_once(t->ev_once, [&] {
        try {
            switch (t->kind) {
            case Term::Kind::Const: t->ev_cache = t->value; break;
            case Term::Kind::Bound:
            case Term::Kind::Free: throw EvalError("evaluation of an open term: " + show(t));
            case Term::Kind::Pair: t->ev_cache = HFSet::of({ev_term(t->a), ev_term(t->b)}); break;
            case Term::Kind::Union: t->ev_cache = hf_union(ev_term(t->a)); break;
            case Term::Kind::Sep: {
                HFSet base = ev_term(t->a);
                if (base.is_omega()) throw EvalError("comprehension over omega is not evaluable: " + show(t));
                Universe u;
                u.omega_fuel = kEvFuel;
                std::vector<HFSet> keep;
                for (const auto& x : base.elems()) {
                    FormP inst = instantiate(t->body, t_const(x));
                    Truth v = eval(inst, u, kEvFuel);
                    if (v == Truth::Unknown) throw EvalError("undecided comprehension filter: " + show(inst));
                    if (v == Truth::True) keep.push_back(x);
                }
                t->ev_cache = HFSet::of(std::move(keep));
                break;
            }
            }
        } catch (const EvalError& e) {
            t->ev_error = e.what();
        }
    });
    if (!t->ev_cache) throw EvalError(t->ev_error);
    return *t->ev_cache;
}

Truth truth_delta0(const FormP& f, const Universe& u) {
    require_closed(f);
    if (!f->is_delta0()) throw ComplexityError("not a Delta0 formula: " + show(f));
    return eval(f, u, u.omega_fuel);
}

Truth truth_level(const FormP& f, Level level, const Universe& u) {
    require_closed(f);
    if (!within_level(f, level)) throw ComplexityError("formula is not " + level_str(level) + ": " + show(f));
    return eval(f, u, u.omega_fuel);
}

Truth truth_any(const FormP& f, const Universe& u) {
    require_closed(f);
    return eval(f, u, u.omega_fuel);
}

Truth truth_sequent(const Sequent& s, const Universe& u) {
    Truth acc = Truth::False;
    for (const auto& f : s.items()) {
        acc = truth_or(acc, truth_any(f, u));
        if (acc == Truth::True) break;
    }
    return acc;
}

}  // namespace kpref
