#pragma once

#include <map>
#include <string>

#include "kpref/kpcalc.hpp"
#include "kpref/rsderiv.hpp"

namespace kpref {

struct EmbedError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

OrdNotation no(const FormP& a);       // omega^rank(a)
OrdNotation no(const Sequent& s);     // natural sum over members

// End {A, not A}, rank 0.
DerivP lem(const FormP& a);
// body binds index 0; end {u != v, not B(u), B(v)}, rank 0.
DerivP ext(const FormP& body, const TermP& u, const TermP& v);
// End {(u != v or not B(u)) or B(v)}.
DerivP ext_axiom(const FormP& body, const TermP& u, const TermP& v);
// End {not A, F(s)} for A the induction premise of F.
DerivP ind_step(const FormP& body, const TermP& s);
// End {not A or forall x F}.
DerivP ind(const FormP& body);
// Closed schema instance; `logical` is the formula of a logical axiom.
DerivP axiom_embed(Schema s, const std::vector<TermP>& terms, const FormP& lam, const FormP& logical = nullptr);

// Length bound claimed by the embedding theorem for a proof with k
// quantifier inferences (k = 0 for an axiom).
OrdNotation embedding_bound(const FinProof& p, unsigned k);

// Free variables missing from subst become the empty set.
DerivP embed_proof(const FinProofP& p, const std::map<std::string, TermP>& subst);

}  // namespace kpref
