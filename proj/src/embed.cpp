#include "kpref/embed.hpp"
#include "kpref/transforms.hpp"

namespace kpref {

namespace {

const OrdNotation kZero = OrdNotation::nat(0);

OrdNotation plus(const OrdNotation& a, std::uint64_t n) { return ord_add_nat(a, n); }

DerivP or_node(int i, const FormP& disj, Sequent side, OrdNotation len, std::shared_ptr<LazyKid> kid,
               const char* origin) {
    return mk_node(i == 0 ? Rule::Or0 : Rule::Or1, disj, std::move(side), std::move(len), kZero, {std::move(kid)},
                   origin);
}

}  // namespace

OrdNotation no(const FormP& a) { return OrdNotation::pow(formula_rank(a)); }

OrdNotation no(const Sequent& s) {
    OrdNotation acc;
    for (const auto& f : s.items()) acc = natural_sum(acc, no(f));
    return acc;
}

DerivP lem(const FormP& a) {
    FormP na = negate(a);
    if (a->is_delta0()) return mk_axiom(Sequent{a, na}, "lem");
    FormP d = is_disjunctive(a) ? a : na;
    FormP c = negate(d);
    OrdNotation len = no(Sequent{a, na});
    if (d->kind == Formula::Kind::Or) {
        std::vector<std::shared_ptr<LazyKid>> kids;
        for (int i = 0; i < 2; ++i) {
            FormP di = decompose_child(d, i);
            FormP ndi = negate(di);
            kids.push_back(lazy([=] {
                return or_node(i, d, Sequent{ndi}, plus(no(Sequent{di, ndi}), 1), lazy([di] { return lem(di); }),
                               "lem");
            }));
        }
        return mk_node(Rule::And, c, Sequent{d}, len, kZero, std::move(kids), "lem");
    }
    Rule inner = d->kind == Formula::Kind::BEx ? Rule::BEx : Rule::Ex;
    Rule outer = d->kind == Formula::Kind::BEx ? Rule::BAll : Rule::All;
    BranchFn fn = [d, inner](const TermP& s) {
        FormP b = decompose_child(d, s);
        FormP nb = negate(b);
        return mk_witness(inner, d, s, Sequent{nb}, plus(no(Sequent{b, nb}), 1), kZero, lazy([b] { return lem(b); }),
                          "lem");
    };
    return mk_branch(outer, c, Sequent{d}, len, kZero, std::move(fn), "lem");
}

DerivP ext(const FormP& body, const TermP& u, const TermP& v) {
    using K = Formula::Kind;
    FormP bu = apply1(body, u), bv = apply1(body, v);
    FormP nbu = negate(bu);
    FormP neq = f_neq(u, v);
    Sequent end{neq, nbu, bv};
    if (body->is_delta0()) return mk_axiom(end, "ext");
    OrdNotation len = no(end);
    auto node_len = [neq](const Sequent& side, const FormP& principal) { return no(side.with(neq).with(principal)); };
    switch (body->kind) {
    case K::And:
    case K::Or: {
        bool conj = body->kind == K::And;
        // conj: And on B(v) over Or_i on not B(u); otherwise the roles swap.
        FormP big = conj ? bv : nbu;
        FormP small = conj ? nbu : bv;
        std::vector<std::shared_ptr<LazyKid>> kids;
        for (int i = 0; i < 2; ++i) {
            FormP bi = i == 0 ? body->l : body->r;
            kids.push_back(lazy([=] {
                FormP biu = negate(apply1(bi, u)), biv = apply1(bi, v);
                Sequent side = conj ? Sequent{neq, biv} : Sequent{neq, biu};
                return or_node(i, small, side, node_len(side, small), lazy([=] { return ext(bi, u, v); }), "ext");
            }));
        }
        return mk_node(Rule::And, big, Sequent{neq, small}, len, kZero, std::move(kids), "ext");
    }
    case K::BAll:
    case K::BEx: {
        bool conj = body->kind == K::BAll;
        FormP fbody = body->l;  // y is 0, x is 1
        // univ: the b-forall principal; exist: its partner on the other side
        FormP univ = conj ? bv : nbu;
        FormP exist = conj ? nbu : bv;
        BranchFn fn = [=](const TermP& r) {
            FormP fr = instantiate(fbody, r);
            FormP g = decompose_child(univ, r);        // r notin T or ...
            FormP both = decompose_child(exist, r);    // r in T' and ...
            FormP guard = decompose_child(both, 0);    // r in T'
            FormP nguard = decompose_child(g, 0);      // r notin T
            FormP rest = decompose_child(g, 1);
            FormP other = decompose_child(both, 1);
            Sequent s0{neq, guard};
            auto k0 = lazy([=] {
                return or_node(0, g, s0, node_len(s0, g), ready(mk_axiom(Sequent{neq, guard, nguard}, "ext")), "ext");
            });
            Sequent s1{neq, other};
            auto k1 = lazy([=] { return or_node(1, g, s1, node_len(s1, g), lazy([=] { return ext(fr, u, v); }), "ext"); });
            Sequent sg{neq, g};
            auto conj_node = lazy([=] {
                return mk_node(Rule::And, both, sg, node_len(sg, both), kZero, {k0, k1}, "ext");
            });
            return mk_witness(Rule::BEx, exist, r, sg, node_len(sg, exist), kZero, conj_node, "ext");
        };
        return mk_branch(Rule::BAll, univ, Sequent{neq, exist}, len, kZero, std::move(fn), "ext");
    }
    case K::All:
    case K::Ex: {
        bool conj = body->kind == K::All;
        FormP fbody = body->l;
        FormP univ = conj ? bv : nbu;
        FormP exist = conj ? nbu : bv;
        BranchFn fn = [=](const TermP& r) {
            FormP fr = instantiate(fbody, r);
            FormP side_f = decompose_child(univ, r);
            Sequent side{neq, side_f};
            return mk_witness(Rule::Ex, exist, r, side, node_len(side, exist), kZero,
                              lazy([=] { return ext(fr, u, v); }), "ext");
        };
        return mk_branch(Rule::All, univ, Sequent{neq, exist}, len, kZero, std::move(fn), "ext");
    }
    default: break;
    }
    return mk_axiom(end, "ext");
}

DerivP ext_axiom(const FormP& body, const TermP& u, const TermP& v) {
    FormP bu = apply1(body, u), bv = apply1(body, v);
    FormP nbu = negate(bu);
    FormP neq = f_neq(u, v);
    FormP d = f_or(neq, nbu);
    FormP e = f_or(d, bv);
    DerivP base = ext(body, u, v);
    OrdNotation l = base->length;
    DerivP n1 = or_node(0, d, Sequent{nbu, bv}, plus(l, 1), ready(base), "ext");
    DerivP n2 = or_node(1, d, Sequent{d, bv}, plus(l, 2), ready(n1), "ext");
    DerivP n3 = or_node(0, e, Sequent{bv}, plus(l, 3), ready(n2), "ext");
    return or_node(1, e, Sequent{e}, plus(l, 4), ready(n3), "ext");
}

DerivP ind_step(const FormP& body, const TermP& s) {
    FormP a = ind_premise(body);
    FormP na = negate(a);
    OrdNotation ra = formula_rank(a);
    OrdNotation rs = set_rank(s);
    FormP fs = apply1(body, s);
    FormP m = decompose_child(na, s);  // (forall y in s) F(y) and not F(s)
    FormP q = decompose_child(m, 0);
    OrdNotation beta = natural_sum(OrdNotation::pow(ra), OrdNotation::pow(rs));
    Sequent side{na, fs};
    BranchFn below = [=](const TermP& t) {
        FormP g = decompose_child(q, t);
        if (ord_lt(set_rank(t), rs))
            return or_node(1, g, side, plus(beta, 1), lazy([=] { return wkn(Sequent{fs}, ind_step(body, t)); }), "ind");
        return or_node(0, g, side, plus(beta, 1), ready(mk_axiom(side.with(decompose_child(g, 0)), "ind")), "ind");
    };
    auto k0 = lazy([=] { return mk_branch(Rule::BAll, q, side, plus(beta, 2), kZero, below, "ind"); });
    auto k1 = lazy([=] { return wkn(Sequent{na}, lem(fs)); });
    auto conj = lazy([=] { return mk_node(Rule::And, m, side, plus(beta, 3), kZero, {k0, k1}, "ind"); });
    OrdNotation len = natural_sum(OrdNotation::pow(ra), OrdNotation::pow(ord_succ(rs)));
    return mk_witness(Rule::Ex, na, s, side, len, kZero, conj, "ind");
}

DerivP ind(const FormP& body) {
    FormP a = ind_premise(body);
    FormP na = negate(a);
    FormP all = f_all(body);
    FormP d = f_or(na, all);
    OrdNotation l = natural_sum(OrdNotation::pow(formula_rank(a)), OrdNotation::omega());
    DerivP root = mk_branch(Rule::All, all, Sequent{na}, l, kZero,
                            [body](const TermP& s) { return ind_step(body, s); }, "ind");
    DerivP n1 = or_node(1, d, Sequent{na}, plus(l, 1), ready(root), "ind");
    return or_node(0, d, Sequent{d}, plus(l, 2), ready(n1), "ind");
}

DerivP axiom_embed(Schema s, const std::vector<TermP>& terms, const FormP& lam, const FormP& logical) {
    auto need = [&](std::size_t n, bool with_lam) {
        if (terms.size() != n || (with_lam && !lam)) throw EmbedError(schema_str(s) + ": bad instantiation");
        for (const auto& t : terms)
            if (!t->closed()) throw EmbedError(schema_str(s) + ": open term " + show(t));
    };
    auto witnessed = [](const FormP& f, const TermP& w) {
        FormP minor = decompose_child(f, w);
        return mk_witness(Rule::Ex, f, w, Sequent{}, OrdNotation::nat(1), kZero, ready(mk_axiom(Sequent{minor}, "axiom")),
                          "axiom");
    };
    try {
        switch (s) {
        case Schema::Logical:
            if (!logical) throw EmbedError("logical axiom without a formula");
            return lem(logical);
        case Schema::Ext: need(2, true); return ext_axiom(lam, terms[0], terms[1]);
        case Schema::Ind: need(0, true); return ind(lam);
        case Schema::Pair: need(2, false); return witnessed(pair_formula(terms[0], terms[1]), t_pair(terms[0], terms[1]));
        case Schema::Union: need(1, false); return witnessed(union_formula(terms[0]), t_union(terms[0]));
        case Schema::Inf: need(0, false); return witnessed(inf_formula(), t_omega());
        case Schema::Sep:
            need(1, true);
            if (!lam->is_delta0()) throw EmbedError("separation matrix is not Delta0");
            return witnessed(sep_formula(terms[0], lam), t_sep(terms[0], lam));
        case Schema::Col: {
            need(1, true);
            if (!lam->is_delta0()) throw EmbedError("collection matrix is not Delta0");
            FormP p = col_premise(terms[0], lam);
            FormP np = negate(p);
            FormP refl = sigma_ref_formula(p);
            FormP d = col_formula(terms[0], lam);
            DerivP l = lem(p);
            OrdNotation alpha = l->length;
            DerivP sr = mk_sigma_ref(p, Sequent{np}, plus(alpha, 1), kZero, ready(l), "col");
            DerivP n1 = or_node(0, d, Sequent{refl}, plus(alpha, 2), ready(sr), "col");
            return or_node(1, d, Sequent{d}, plus(alpha, 3), ready(n1), "col");
        }
        }
    } catch (const SyntaxError& e) {
        throw EmbedError(schema_str(s) + ": " + e.what());
    }
    throw EmbedError("unknown schema");
}

OrdNotation embedding_bound(const FinProof& p, unsigned k) {
    OrdNotation w = OrdNotation::pow(OrdNotation::nat(1));
    if (p.rule == FinRule::Axiom) return omega_mul_left(OrdNotation::pow(w));
    return omega_mul_left(phi0_iterate(k + 1, w));
}

namespace {

using Subst = std::map<std::string, TermP>;

FormP close_f(const FormP& f, const Subst& sigma) {
    FormP g = substitute(f, sigma);
    if (!g->has_free) return g;
    std::set<std::string> fv;
    free_vars(g, fv);
    Subst dead;
    for (const auto& v : fv) dead[v] = t_empty();
    return substitute(g, dead);
}

TermP close_t(const TermP& t, const Subst& sigma) {
    TermP g = substitute_term(t, sigma);
    if (!g->has_free) return g;
    std::set<std::string> fv;
    free_vars_term(g, fv);
    Subst dead;
    for (const auto& v : fv) dead[v] = t_empty();
    return substitute_term(g, dead);
}

Sequent close_s(const Sequent& s, const Subst& sigma) {
    std::vector<FormP> out;
    for (const auto& f : s.items()) out.push_back(close_f(f, sigma));
    return Sequent(out);
}

unsigned quantifier_count(const FinProof& p) {
    unsigned k = (p.rule == FinRule::BAll || p.rule == FinRule::All) ? 1 : 0;
    for (const auto& c : p.kids) k += quantifier_count(*c);
    return k;
}

OrdNotation static_rank(const FinProof& p, const Subst& sigma) {
    if (p.rule == FinRule::Axiom) return kZero;
    if (p.rule == FinRule::BAll || p.rule == FinRule::All) {
        Subst s2 = sigma;
        s2[p.eigen] = t_empty();
        return ord_max(OrdNotation::omega(), static_rank(*p.kids[0], s2));
    }
    OrdNotation r = OrdNotation::omega();
    for (const auto& c : p.kids) r = ord_max(r, static_rank(*c, sigma));
    if (p.rule == FinRule::Cut) r = ord_max(r, ord_succ(formula_rank(close_f(p.principal, sigma))));
    return r;
}

Rule rs_rule(FinRule r) {
    switch (r) {
    case FinRule::And: return Rule::And;
    case FinRule::Or0: return Rule::Or0;
    case FinRule::Or1: return Rule::Or1;
    case FinRule::BAll: return Rule::BAll;
    case FinRule::BEx: return Rule::BEx;
    case FinRule::All: return Rule::All;
    case FinRule::Ex: return Rule::Ex;
    case FinRule::Cut: return Rule::Cut;
    default: return Rule::Axiom;
    }
}

DerivP embed_at(const FinProofP& p, const Subst& sigma) {
    Sequent side = close_s(p->side, sigma);
    if (p->rule == FinRule::Axiom) {
        std::vector<TermP> terms;
        for (const auto& t : p->terms) terms.push_back(close_t(t, sigma));
        FormP lam = p->lam ? close_f(p->lam, sigma) : nullptr;
        FormP logical = p->principal ? close_f(p->principal, sigma) : nullptr;
        return wkn(side, axiom_embed(p->schema, terms, lam, logical));
    }
    FormP principal = close_f(p->principal, sigma);
    if (p->rule == FinRule::BAll || p->rule == FinRule::All) {
        OrdNotation len = omega_mul_left(phi0_iterate(quantifier_count(*p), OrdNotation::pow(OrdNotation::nat(1))));
        OrdNotation rank = static_rank(*p, sigma);
        BranchFn fn = [p, sigma](const TermP& t) {
            Subst s2 = sigma;
            s2[p->eigen] = t;
            return embed_at(p->kids[0], s2);
        };
        return mk_branch(rs_rule(p->rule), principal, side, len, rank, std::move(fn), "embed");
    }
    std::vector<DerivP> kids;
    OrdNotation len, rank = OrdNotation::omega();
    for (const auto& c : p->kids) {
        kids.push_back(embed_at(c, sigma));
        len = ord_max(len, kids.back()->length);
        rank = ord_max(rank, kids.back()->rank);
    }
    len = ord_succ(len);
    if (p->rule == FinRule::Cut) rank = ord_max(rank, ord_succ(formula_rank(principal)));
    std::vector<std::shared_ptr<LazyKid>> lk;
    for (auto& k : kids) lk.push_back(ready(k));
    if (p->rule == FinRule::BEx || p->rule == FinRule::Ex)
        return mk_witness(rs_rule(p->rule), principal, close_t(p->witness, sigma), side, len, rank, lk[0], "embed");
    return mk_node(rs_rule(p->rule), principal, side, len, rank, std::move(lk), "embed");
}

}  // namespace

DerivP embed_proof(const FinProofP& p, const std::map<std::string, TermP>& subst) {
    for (const auto& [n, t] : subst)
        if (!t->closed()) throw EmbedError("substitution for " + n + " is not closed");
    DerivP root = embed_at(p, subst);
    if (ord_lt(root->rank, OrdNotation::omega())) root = with_bounds(root, root->length, OrdNotation::omega());
    return root;
}

}  // namespace kpref
