#include "kpref/kpcalc.hpp"

#include <cctype>
#include <fstream>
#include <functional>
#include <sstream>

#include "corpus_data.hpp"

namespace kpref {

std::string fin_rule_str(FinRule r) {
    switch (r) {
    case FinRule::Axiom: return "axiom";
    case FinRule::And: return "and";
    case FinRule::Or0: return "or0";
    case FinRule::Or1: return "or1";
    case FinRule::BAll: return "ball";
    case FinRule::BEx: return "bex";
    case FinRule::All: return "all";
    case FinRule::Ex: return "ex";
    case FinRule::Cut: return "cut";
    }
    return "?";
}

std::string schema_str(Schema s) {
    switch (s) {
    case Schema::Logical: return "logical";
    case Schema::Ext: return "ext";
    case Schema::Ind: return "ind";
    case Schema::Pair: return "pair";
    case Schema::Union: return "union";
    case Schema::Inf: return "inf";
    case Schema::Sep: return "sep";
    case Schema::Col: return "col";
    }
    return "?";
}

FormP apply1(const FormP& body, const TermP& t) { return instantiate(body, t); }

FormP apply2(const FormP& body, const TermP& tx, const TermP& ty) { return instantiate(instantiate(body, ty), tx); }

FormP ext_formula(const FormP& body, const TermP& u, const TermP& v) {
    return f_or(f_or(f_neq(u, v), negate(apply1(body, u))), apply1(body, v));
}

FormP ind_premise(const FormP& body) {
    return h_all([&](const TermP& x) {
        return f_or(h_bex(x, [&](const TermP& y) { return negate(apply1(body, y)); }), apply1(body, x));
    });
}

FormP ind_formula(const FormP& body) { return f_or(negate(ind_premise(body)), f_all(body)); }

FormP pair_formula(const TermP& u, const TermP& v) {
    return h_ex([&](const TermP& z) { return f_and(f_mem(u, z), f_mem(v, z)); });
}

FormP union_formula(const TermP& u) {
    return h_ex([&](const TermP& z) {
        return h_ball(u, [&](const TermP& y) { return h_ball(y, [&](const TermP& x) { return f_mem(x, z); }); });
    });
}

FormP inf_formula() {
    return h_ex([](const TermP& x) {
        return f_and(h_bex(x, [&](const TermP& z) { return f_mem(z, x); }),
                     h_ball(x, [&](const TermP& y) { return h_bex(x, [&](const TermP& z) { return f_mem(y, z); }); }));
    });
}

FormP sep_formula(const TermP& u, const FormP& body) {
    return h_ex([&](const TermP& y) {
        return f_and(h_ball(y, [&](const TermP& x) { return f_and(f_mem(x, u), apply1(body, x)); }),
                     h_ball(u, [&](const TermP& x) { return f_or(negate(apply1(body, x)), f_mem(x, y)); }));
    });
}

FormP col_premise(const TermP& u, const FormP& body) {
    return h_ball(u, [&](const TermP& x) { return h_ex([&](const TermP& y) { return apply2(body, x, y); }); });
}

FormP col_formula(const TermP& u, const FormP& body) {
    FormP p = col_premise(u, body);
    return f_or(negate(p), sigma_ref_formula(p));
}

Sequent axiom_instance(const FinProof& p) {
    const auto& t = p.terms;
    switch (p.schema) {
    case Schema::Logical: return Sequent{p.principal, negate(p.principal)};
    case Schema::Ext: return Sequent{ext_formula(p.lam, t[0], t[1])};
    case Schema::Ind: return Sequent{ind_formula(p.lam)};
    case Schema::Pair: return Sequent{pair_formula(t[0], t[1])};
    case Schema::Union: return Sequent{union_formula(t[0])};
    case Schema::Inf: return Sequent{inf_formula()};
    case Schema::Sep: return Sequent{sep_formula(t[0], p.lam)};
    case Schema::Col: return Sequent{col_formula(t[0], p.lam)};
    }
    return {};
}

Sequent fin_end(const FinProof& p) {
    if (p.rule == FinRule::Axiom) return p.side.merged(axiom_instance(p));
    if (p.rule == FinRule::Cut) return p.side;
    return p.side.with(p.principal);
}

FormP fin_minor(const FinProof& p, std::size_t i) {
    switch (p.rule) {
    case FinRule::Axiom: throw SyntaxError("axiom has no premises");
    case FinRule::And: return decompose_child(p.principal, static_cast<int>(i));
    case FinRule::Or0: return decompose_child(p.principal, 0);
    case FinRule::Or1: return decompose_child(p.principal, 1);
    case FinRule::BAll:
    case FinRule::All: return decompose_child(p.principal, t_free(p.eigen));
    case FinRule::BEx:
    case FinRule::Ex: return decompose_child(p.principal, p.witness);
    case FinRule::Cut: return i == 0 ? p.principal : negate(p.principal);
    }
    throw SyntaxError("bad rule");
}

namespace {

std::size_t rule_arity(FinRule r) {
    if (r == FinRule::Axiom) return 0;
    if (r == FinRule::And || r == FinRule::Cut) return 2;
    return 1;
}

Formula::Kind rule_kind(FinRule r) {
    switch (r) {
    case FinRule::And: return Formula::Kind::And;
    case FinRule::Or0:
    case FinRule::Or1: return Formula::Kind::Or;
    case FinRule::BAll: return Formula::Kind::BAll;
    case FinRule::BEx: return Formula::Kind::BEx;
    case FinRule::All: return Formula::Kind::All;
    default: return Formula::Kind::Ex;
    }
}

// n with rank(A) <= Omega+n; A is unbounded, so the rank does not depend on its terms.
unsigned omega_excess(const FormP& a) {
    std::set<std::string> fv;
    free_vars(a, fv);
    std::map<std::string, TermP> sigma;
    for (const auto& v : fv) sigma[v] = t_empty();
    OrdNotation r = formula_rank(substitute(a, sigma));
    unsigned n = 0;
    while (!ord_le(r, omega_plus(n))) ++n;
    return n;
}

void check_node(const FinProof& p, const std::string& path, CheckReport& rep, unsigned& max_excess, bool& any_cut) {
    ++rep.nodes;
    auto bad = [&](const std::string& m) { rep.violations.push_back({path, m}); };
    if (p.rule == FinRule::BAll || p.rule == FinRule::All) ++rep.k;
    if (p.kids.size() != rule_arity(p.rule)) {
        bad("rule " + fin_rule_str(p.rule) + " expects " + std::to_string(rule_arity(p.rule)) + " premises");
        return;
    }
    for (const auto& f : p.side.items())
        if (f->loose) bad("side formula with unbound variable");
    if (p.rule == FinRule::Axiom) {
        std::size_t want_terms = 0;
        unsigned want_lam = 0;
        switch (p.schema) {
        case Schema::Ext: want_terms = 2, want_lam = 1; break;
        case Schema::Ind: want_lam = 1; break;
        case Schema::Pair: want_terms = 2; break;
        case Schema::Union: want_terms = 1; break;
        case Schema::Sep: want_terms = 1, want_lam = 1; break;
        case Schema::Col: want_terms = 1, want_lam = 2; break;
        default: break;
        }
        if (p.schema == Schema::Logical && !p.principal) bad("logical axiom without a formula");
        if (p.terms.size() != want_terms) bad(schema_str(p.schema) + " axiom expects " + std::to_string(want_terms) + " terms");
        if ((want_lam > 0) != (p.lam != nullptr) || (want_lam && p.lam_arity != want_lam))
            bad(schema_str(p.schema) + " axiom expects a matrix with " + std::to_string(want_lam) + " bound variables");
        if ((p.schema == Schema::Sep || p.schema == Schema::Col) && p.lam && !p.lam->is_delta0())
            bad(schema_str(p.schema) + " matrix is not Delta0");
        return;
    }
    if (!p.principal) {
        bad("missing principal formula");
        return;
    }
    if (p.rule == FinRule::Cut) {
        any_cut = true;
        if (!p.principal->is_delta0()) max_excess = std::max(max_excess, omega_excess(p.principal) + 1);
    } else if (p.principal->kind != rule_kind(p.rule)) {
        bad("principal formula does not match rule " + fin_rule_str(p.rule));
        return;
    }
    if ((p.rule == FinRule::BEx || p.rule == FinRule::Ex) && (!p.witness || p.witness->loose))
        bad("bad witness term");
    Sequent concl = fin_end(p);
    if (p.rule == FinRule::BAll || p.rule == FinRule::All) {
        for (const auto& f : concl.items())
            if (occurs_free(f, p.eigen)) {
                bad("eigenvariable " + p.eigen + " occurs in the conclusion");
                break;
            }
    }
    for (std::size_t i = 0; i < p.kids.size(); ++i) {
        const FinProof& c = *p.kids[i];
        std::string cpath = path == "." ? std::to_string(i) : path + "/" + std::to_string(i);
        Sequent got = fin_end(c);
        Sequent want = p.side.with(fin_minor(p, i));
        if (got != want)
            bad(std::string(p.rule == FinRule::Cut ? "cut premises are not dual: " : "") + "premise " +
                std::to_string(i) + " ends " + got.str() + ", rule needs " + want.str());
        check_node(c, cpath, rep, max_excess, any_cut);
    }
}

const SExpr& at(const SExpr& e, std::size_t i) {
    if (e.atom || i >= e.list.size())
        throw SyntaxError("proof syntax error at offset " + std::to_string(e.offset) + ": missing argument");
    return e.list[i];
}

[[noreturn]] void perr(const SExpr& e, const std::string& m) {
    throw SyntaxError("proof syntax error at offset " + std::to_string(e.offset) + ": " + m);
}

Sequent side_of(const SExpr& e) {
    if (e.atom || e.list.empty() || !e.list[0].atom || e.list[0].text != "side") perr(e, "expected (side ...)");
    std::vector<FormP> fs;
    for (std::size_t i = 1; i < e.list.size(); ++i) {
        std::vector<std::string> scope;
        fs.push_back(formula_from_sexpr(e.list[i], scope));
    }
    return Sequent(fs);
}

FormP formula_at(const SExpr& e) {
    std::vector<std::string> scope;
    return formula_from_sexpr(e, scope);
}

TermP term_at(const SExpr& e) {
    std::vector<std::string> scope;
    return term_from_sexpr(e, scope);
}

FormP lam_at(const SExpr& e, unsigned& arity) {
    if (e.atom || e.list.size() < 3 || !e.list[0].atom || e.list[0].text != "lam") perr(e, "expected (lam x ... body)");
    std::vector<std::string> scope;
    for (std::size_t i = 1; i + 1 < e.list.size(); ++i) {
        if (!e.list[i].atom) perr(e.list[i], "expected a variable name");
        scope.push_back(e.list[i].text);
    }
    arity = static_cast<unsigned>(scope.size());
    return formula_from_sexpr(e.list.back(), scope);
}

const std::string& name_at(const SExpr& e) {
    if (!e.atom || e.text.empty() || e.text[0] == '{') perr(e, "expected a variable name");
    return e.text;
}

FinProofP proof_from(const SExpr& e) {
    if (e.atom || e.list.empty() || !e.list[0].atom) perr(e, "expected a proof node");
    auto p = std::make_shared<FinProof>();
    p->offset = e.offset;
    const std::string& h = e.list[0].text;
    std::size_t n = e.list.size();
    auto kids_from = [&](std::size_t first) {
        for (std::size_t i = first; i < n; ++i) p->kids.push_back(proof_from(e.list[i]));
    };
    if (h == "axiom") {
        p->rule = FinRule::Axiom;
        const std::string& s = name_at(at(e, 1));
        if (n < 3) perr(e, "axiom needs (side ...)");
        p->side = side_of(e.list[n - 1]);
        std::vector<const SExpr*> args;
        for (std::size_t i = 2; i + 1 < n; ++i) args.push_back(&e.list[i]);
        auto need = [&](std::size_t k) {
            if (args.size() != k) perr(e, s + " axiom expects " + std::to_string(k) + " arguments");
        };
        if (s == "logical") {
            p->schema = Schema::Logical;
            need(1);
            p->principal = formula_at(*args[0]);
        } else if (s == "ext") {
            p->schema = Schema::Ext;
            need(3);
            p->terms = {term_at(*args[0]), term_at(*args[1])};
            p->lam = lam_at(*args[2], p->lam_arity);
        } else if (s == "ind") {
            p->schema = Schema::Ind;
            need(1);
            p->lam = lam_at(*args[0], p->lam_arity);
        } else if (s == "pair") {
            p->schema = Schema::Pair;
            need(2);
            p->terms = {term_at(*args[0]), term_at(*args[1])};
        } else if (s == "union") {
            p->schema = Schema::Union;
            need(1);
            p->terms = {term_at(*args[0])};
        } else if (s == "inf") {
            p->schema = Schema::Inf;
            need(0);
        } else if (s == "sep") {
            p->schema = Schema::Sep;
            need(2);
            p->terms = {term_at(*args[0])};
            p->lam = lam_at(*args[1], p->lam_arity);
        } else if (s == "col") {
            p->schema = Schema::Col;
            need(2);
            p->terms = {term_at(*args[0])};
            p->lam = lam_at(*args[1], p->lam_arity);
        } else {
            perr(e, "unknown axiom schema '" + s + "'");
        }
        return p;
    }
    if (h == "and" || h == "or0" || h == "or1") {
        p->rule = h == "and" ? FinRule::And : (h == "or0" ? FinRule::Or0 : FinRule::Or1);
        p->principal = formula_at(at(e, 1));
        p->side = side_of(at(e, 2));
        kids_from(3);
        return p;
    }
    if (h == "ball" || h == "all") {
        p->rule = h == "ball" ? FinRule::BAll : FinRule::All;
        p->principal = formula_at(at(e, 1));
        p->eigen = name_at(at(e, 2));
        p->side = side_of(at(e, 3));
        kids_from(4);
        return p;
    }
    if (h == "bex" || h == "ex") {
        p->rule = h == "bex" ? FinRule::BEx : FinRule::Ex;
        p->principal = formula_at(at(e, 1));
        p->witness = term_at(at(e, 2));
        p->side = side_of(at(e, 3));
        kids_from(4);
        return p;
    }
    if (h == "cut") {
        p->rule = FinRule::Cut;
        p->principal = formula_at(at(e, 1));
        p->side = side_of(at(e, 2));
        kids_from(3);
        return p;
    }
    perr(e, "unknown rule '" + h + "'");
}

std::string lam_str(const FinProof& p) {
    // Print the matrix under named binders via a throwaway quantifier.
    FormP wrapped = p.lam;
    for (unsigned i = 0; i < p.lam_arity; ++i) wrapped = f_all(wrapped);
    std::string s = show(wrapped);
    std::string names;
    for (unsigned i = 0; i < p.lam_arity; ++i) {
        std::string prefix = "(all x" + std::to_string(i) + " ";
        s = s.substr(prefix.size(), s.size() - prefix.size() - 1);
        names += " x" + std::to_string(i);
    }
    return "(lam" + names + " " + s + ")";
}

std::string side_str(const Sequent& s) {
    std::string out = "(side";
    for (const auto& f : s.items()) out += " " + show(f);
    return out + ")";
}

}  // namespace

CheckReport check_fin(const FinProof& p) {
    CheckReport rep;
    unsigned max_excess = 0;
    bool any_cut = false;
    check_node(p, ".", rep, max_excess, any_cut);
    rep.m = max_excess;
    return rep;
}

FinProofP mk_fin_axiom(Schema s, std::vector<TermP> terms, FormP lam, FormP logical, Sequent side) {
    auto p = std::make_shared<FinProof>();
    p->rule = FinRule::Axiom;
    p->schema = s;
    p->terms = std::move(terms);
    if (lam) {
        p->lam_arity = s == Schema::Col ? 2 : 1;
        p->lam = std::move(lam);
    }
    p->principal = std::move(logical);
    p->side = std::move(side);
    return p;
}

FinProofP parse_proof(const std::string& text) { return proof_from(read_sexpr(text)); }

FinProofP load_proof(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_proof(ss.str());
}

std::string write_proof(const FinProof& p) {
    std::string s = "(" + fin_rule_str(p.rule);
    if (p.rule == FinRule::Axiom) {
        s += " " + schema_str(p.schema);
        if (p.schema == Schema::Logical) s += " " + show(p.principal);
        for (const auto& t : p.terms) s += " " + show(t);
        if (p.lam) s += " " + lam_str(p);
        return s + " " + side_str(p.side) + ")";
    }
    s += " " + show(p.principal);
    if (p.rule == FinRule::BAll || p.rule == FinRule::All) s += " " + p.eigen;
    if (p.rule == FinRule::BEx || p.rule == FinRule::Ex) s += " " + show(p.witness);
    s += " " + side_str(p.side);
    for (const auto& k : p.kids) s += " " + write_proof(*k);
    return s + ")";
}

std::set<std::string> fin_free_vars(const FinProof& p) {
    std::set<std::string> out;
    Sequent end = fin_end(p);
    for (const auto& f : end.items()) free_vars(f, out);
    return out;
}

std::map<std::string, TermP> parse_subst(const std::string& text) {
    std::map<std::string, TermP> out;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        if (i >= text.size()) break;
        std::size_t eq = text.find('=', i);
        if (eq == std::string::npos) throw SyntaxError("substitution entry without '=' at offset " + std::to_string(i));
        std::string name = text.substr(i, eq - i);
        // the value runs to the next top-level space
        std::size_t j = eq + 1;
        int depth = 0;
        while (j < text.size() && (depth > 0 || !std::isspace(static_cast<unsigned char>(text[j])))) {
            if (text[j] == '{' || text[j] == '(') ++depth;
            if (text[j] == '}' || text[j] == ')') --depth;
            ++j;
        }
        TermP t = parse_term(text.substr(eq + 1, j - eq - 1));
        if (!t->closed()) throw SyntaxError("substituted term for " + name + " is not closed");
        out[name] = t;
        i = j;
    }
    return out;
}

const std::vector<CorpusEntry>& corpus() {
    static const std::vector<CorpusEntry> entries = [] {
        struct Meta {
            const char* name;
            const char* subst;
            unsigned k, m;
            bool sigma;
        };
        const Meta meta[] = {
            {"logical", "a={{}}", 0, 0, false},
            {"ext", "a={} b={{}}", 0, 0, false},
            {"ind", "", 0, 0, false},
            {"pair", "a={} b={{}}", 0, 0, false},
            {"union", "a={{{}}}", 0, 0, false},
            {"inf", "", 0, 0, false},
            {"sep", "a={{},{{}}} b={{}}", 0, 0, false},
            {"col", "a={{},{{}}}", 0, 0, true},
            {"cut", "a={} b={{}}", 0, 2, false},
            {"forall", "b={{}}", 1, 0, false},
            {"ball_chain", "b={{},{{}}}", 2, 0, false},
        };
        std::vector<CorpusEntry> out;
        for (const auto& m : meta) {
            auto it = corpus_files().find(m.name);
            if (it == corpus_files().end()) throw std::logic_error(std::string("corpus file missing: ") + m.name);
            out.push_back({m.name, it->second, m.subst, m.k, m.m, m.sigma});
        }
        return out;
    }();
    return entries;
}

const std::vector<BadEntry>& bad_corpus() {
    static const std::vector<BadEntry> entries = [] {
        std::vector<BadEntry> out;
        out.push_back({"bad_eigen", corpus_files().at("bad_eigen"), "eigenvariable"});
        out.push_back({"bad_cut", corpus_files().at("bad_cut"), "not dual"});
        return out;
    }();
    return entries;
}

}  // namespace kpref
