#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "kpref/syntax.hpp"

namespace kpref {

enum class FinRule { Axiom, And, Or0, Or1, BAll, BEx, All, Ex, Cut };
enum class Schema { Logical, Ext, Ind, Pair, Union, Inf, Sep, Col };
std::string fin_rule_str(FinRule r);
std::string schema_str(Schema s);

struct FinProof;
using FinProofP = std::shared_ptr<const FinProof>;

struct FinProof {
    FinRule rule = FinRule::Axiom;
    Schema schema = Schema::Logical;
    FormP principal;            // rule formula, cut formula, or the logical axiom's A
    std::vector<TermP> terms;   // schema term arguments
    FormP lam;                  // schema matrix; binds index 0 (Col: x is 1, y is 0)
    unsigned lam_arity = 0;
    std::string eigen;          // BAll, All
    TermP witness;              // BEx, Ex
    Sequent side;
    std::vector<FinProofP> kids;
    std::size_t offset = 0;
};

// Schema instances; terms may contain free variables.
FormP ext_formula(const FormP& body, const TermP& u, const TermP& v);  // (u!=v or not B(u)) or B(v)
FormP ind_premise(const FormP& body);                                  // forall x((forall y in x)F(y) -> F(x))
FormP ind_formula(const FormP& body);                                  // not A or forall x F
FormP pair_formula(const TermP& u, const TermP& v);
FormP union_formula(const TermP& u);
FormP inf_formula();
FormP sep_formula(const TermP& u, const FormP& body);
FormP col_premise(const TermP& u, const FormP& body);  // (forall x in u) exists y G
FormP col_formula(const TermP& u, const FormP& body);
// body with index 0 := t (Col: x := tx, y := ty)
FormP apply1(const FormP& body, const TermP& t);
FormP apply2(const FormP& body, const TermP& tx, const TermP& ty);

Sequent axiom_instance(const FinProof& p);
Sequent fin_end(const FinProof& p);
FormP fin_minor(const FinProof& p, std::size_t i);

struct FinViolation {
    std::string path;
    std::string message;
};

struct CheckReport {
    std::vector<FinViolation> violations;
    std::size_t nodes = 0;
    unsigned k = 0;  // BAll/All inferences
    unsigned m = 0;  // 0 without unbounded cuts, else 1 + max n with rank(A) <= Omega+n
    bool valid() const { return violations.empty(); }
};
CheckReport check_fin(const FinProof& p);

FinProofP mk_fin_axiom(Schema s, std::vector<TermP> terms, FormP lam, FormP logical, Sequent side);
FinProofP parse_proof(const std::string& text);
FinProofP load_proof(const std::string& path);
std::string write_proof(const FinProof& p);

// Free variables of the end sequent.
std::set<std::string> fin_free_vars(const FinProof& p);
std::map<std::string, TermP> parse_subst(const std::string& text);  // "a={} b={{}}"

struct CorpusEntry {
    std::string name;
    std::string text;
    std::string subst;  // standard substitution
    unsigned k;
    unsigned m;
    bool has_sigma_ref;
};
const std::vector<CorpusEntry>& corpus();
// Shipped files that must be rejected by the checker.
struct BadEntry {
    std::string name;
    std::string text;
    std::string expected;  // substring of the violation
};
const std::vector<BadEntry>& bad_corpus();

}  // namespace kpref
