#include "kpref/transforms.hpp"

#include <mutex>

namespace kpref {

namespace {

std::mutex g_hook_mu;
TransformHook g_hook;

void emit(const char* op, const DerivP& out, const Sequent& expected, const OrdNotation& len, const OrdNotation& rank) {
    TransformHook h;
    {
        std::lock_guard<std::mutex> lock(g_hook_mu);
        h = g_hook;
    }
    if (h) h(TransformEvent{op, out, expected, len, rank});
}

using ChildMap = std::function<DerivP(const Index&, const FormP& minor, const DerivP& orig)>;

// w's rule over a new side and bounds, children rewritten by f.
DerivP remake(const DerivP& w, Sequent side, OrdNotation len, OrdNotation rank, ChildMap f, const std::string& origin) {
    auto checked = [len, origin](DerivP c) {
        if (!ord_lt(c->length, len))
            throw TransformError(origin + ": child length " + c->length.str() + " not below " + len.str());
        return c;
    };
    if (w->branching()) {
        BranchFn fn = [w, f, checked](const TermP& s) { return checked(f(s, child_minor(*w, s), w->at(s))); };
        return mk_branch(w->rule, w->principal, std::move(side), std::move(len), std::move(rank), std::move(fn),
                         origin);
    }
    std::vector<std::shared_ptr<LazyKid>> kids;
    for (std::size_t i = 0; i < w->kids.size(); ++i) {
        kids.push_back(lazy([w, f, checked, i] {
            Index idx = static_cast<int>(i);
            return checked(f(idx, child_minor(*w, idx), w->kid(i)));
        }));
    }
    auto d = std::make_shared<Derivation>();
    d->rule = w->rule;
    d->principal = w->principal;
    d->witness = w->witness;
    d->minor = w->minor;
    d->side = std::move(side);
    d->length = std::move(len);
    d->rank = std::move(rank);
    d->kids = std::move(kids);
    d->origin = origin;
    return d;
}

bool principal_for(const Derivation& w, const FormP& f) {
    return w.rule != Rule::Axiom && w.rule != Rule::Cut && w.principal->key == f->key;
}

// The premise of a principal inference at index i.
DerivP premise_at(const DerivP& w, const Index& i) {
    if (w->branching()) return w->at(std::get<TermP>(i));
    if (w->rule == Rule::And) return w->kid(static_cast<std::size_t>(std::get<int>(i)));
    return w->kid(0);
}

DerivP cut_elim_at(const DerivP& w, const OrdNotation& r);

}  // namespace

void set_transform_hook(TransformHook hook) {
    std::lock_guard<std::mutex> lock(g_hook_mu);
    g_hook = std::move(hook);
}

DerivP wkn(const Sequent& extra, const DerivP& w) {
    Sequent end = w->end();
    Sequent expected = end.merged(extra);
    DerivP out;
    if (extra.subset_of(end)) {
        out = w;
    } else if (w->rule == Rule::Axiom) {
        out = mk_axiom(expected, "wkn");
    } else if (w->rule == Rule::Cut && extra.contains(w->principal)) {
        out = wkn(extra, w->kid(0));
    } else {
        out = remake(w, w->side.merged(extra), w->length, w->rank,
                     [extra](const Index&, const FormP&, const DerivP& c) { return wkn(extra, c); }, "wkn");
    }
    emit("wkn", out, expected, w->length, w->rank);
    return out;
}

DerivP fit(const DerivP& w, const Sequent& target) {
    Sequent end = w->end();
    if (!end.subset_of(target)) throw TransformError("fit: " + end.str() + " is not contained in " + target.str());
    return wkn(target.minus(end), w);
}

DerivP inv(const FormP& a, const DerivP& w, const Index& i) {
    if (!is_conjunctive(a) || a->is_delta0())
        throw TransformError("inversion needs a conjunctive non-Delta0 formula: " + show(a));
    FormP ai = decompose_child(a, i);
    Sequent end = w->end();
    Sequent expected = end.without(a).with(ai);
    DerivP out;
    if (!end.contains(a)) {
        out = wkn({ai}, w);
    } else if (w->rule == Rule::Axiom) {
        out = mk_axiom(expected, "inv");
    } else if (principal_for(*w, a)) {
        DerivP c = premise_at(w, i);
        out = w->side.contains(a) ? inv(a, c, i) : c;
    } else {
        Sequent side = w->side.without(a).with(ai);
        out = remake(w, side, w->length, w->rank,
                     [a, i, side](const Index&, const FormP& minor, const DerivP& c) {
                         return fit(inv(a, c, i), side.with(minor));
                     },
                     "inv");
    }
    emit("inv", out, expected, w->length, w->rank);
    return out;
}

DerivP red(const FormP& c, const DerivP& w0, const DerivP& w1, const Sequent& gamma) {
    OrdNotation rc = formula_rank(c);
    if (!ord_lt(OrdNotation::omega(), rc))
        throw TransformError("reduction needs a formula of rank above Omega: " + show(c));
    FormP nc = negate(c);
    if (!w0->end().subset_of(gamma.with(c)))
        throw TransformError("reduction: left end " + w0->end().str() + " not within gamma," + show(c));
    if (!w1->end().subset_of(gamma.with(nc)))
        throw TransformError("reduction: right end " + w1->end().str() + " not within gamma," + show(nc));
    OrdNotation r = ord_max(rc, ord_max(w0->rank, w1->rank));
    OrdNotation len = natural_sum(w0->length, w1->length);
    DerivP out;
    if (w0->rule == Rule::Axiom || w1->rule == Rule::Axiom) {
        out = mk_axiom(gamma, "red");
    } else if (!principal_for(*w0, c)) {
        out = remake(w0, gamma, len, r,
                     [c, w1, gamma](const Index&, const FormP& m, const DerivP& k) {
                         return red(c, k, wkn({m}, w1), gamma.with(m));
                     },
                     "red");
    } else if (!principal_for(*w1, nc)) {
        out = remake(w1, gamma, len, r,
                     [c, w0, gamma](const Index&, const FormP& m, const DerivP& k) {
                         return red(c, wkn({m}, w0), k, gamma.with(m));
                     },
                     "red");
    } else if (w0->rule == Rule::SigmaRef || w1->rule == Rule::SigmaRef) {
        throw TransformError("reduction: reflection inference cannot be principal for " + show(c));
    } else if (is_disjunctive(c)) {
        Index idx = *principal_index(*w0, 0);
        FormP m = child_minor(*w0, idx);
        FormP nm = negate(m);
        auto k0 = lazy([=] { return red(c, w0->kid(0), wkn({m}, w1), gamma.with(m)); });
        auto k1 = lazy([=] { return fit(inv(nc, w1, idx), gamma.with(nm)); });
        out = mk_node(Rule::Cut, m, gamma, len, r, {k0, k1}, "red");
    } else {
        Index idx = *principal_index(*w1, 0);
        FormP m = child_minor(*w1, idx);
        FormP n = negate(m);
        auto k0 = lazy([=] { return fit(inv(c, w0, idx), gamma.with(n)); });
        auto k1 = lazy([=] { return red(c, wkn({m}, w0), w1->kid(0), gamma.with(m)); });
        out = mk_node(Rule::Cut, n, gamma, len, r, {k0, k1}, "red");
    }
    emit("red", out, gamma, len, r);
    return out;
}

namespace {

DerivP cut_elim_at(const DerivP& w, const OrdNotation& r) {
    OrdNotation cap = OrdNotation::pow(w->length);
    if (!ord_le(w->rank, ord_succ(r)))
        throw TransformError("cut elimination: node rank " + w->rank.str() + " exceeds " + ord_succ(r).str());
    DerivP out;
    if (w->rule == Rule::Axiom) {
        out = w;
    } else if (w->rule == Rule::Cut && ord_eq(formula_rank(w->principal), r)) {
        out = red(w->principal, cut_elim_at(w->kid(0), r), cut_elim_at(w->kid(1), r), w->side);
        // record the stated bound rather than the sharper a#b
        if (out->rule != Rule::Axiom) out = with_bounds(out, cap, r);
    } else {
        if (w->rule == Rule::Cut && !ord_lt(formula_rank(w->principal), r))
            throw TransformError("cut elimination: cut formula rank above bound");
        out = remake(w, w->side, cap, r, [r](const Index&, const FormP&, const DerivP& k) { return cut_elim_at(k, r); },
                     "cutelim");
    }
    emit("cutelim", out, w->end(), cap, r);
    return out;
}

}  // namespace

DerivP cut_elim(const DerivP& w) {
    if (!is_successor(w->rank)) throw TransformError("cut elimination needs a successor rank bound, got " + w->rank.str());
    OrdNotation r = ord_pred(w->rank);
    if (!ord_lt(OrdNotation::omega(), r))
        throw TransformError("cut elimination needs rank bound above Omega+1, got " + w->rank.str());
    return cut_elim_at(w, r);
}

}  // namespace kpref
