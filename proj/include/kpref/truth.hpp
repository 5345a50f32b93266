#pragma once

#include <string>

#include "kpref/hfset.hpp"
#include "kpref/syntax.hpp"

namespace kpref {

enum class Truth { True, False, Unknown };

std::string truth_str(Truth t);
Truth truth_not(Truth t);
Truth truth_and(Truth a, Truth b);
Truth truth_or(Truth a, Truth b);

struct ComplexityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Sigma_n or Pi_n; n = 0 is Delta0 either way.
struct Level {
    bool sigma = true;
    unsigned n = 0;
};
std::string level_str(Level l);
bool within_level(const FormP& f, Level l);
// Least level containing f, preferring Pi on ties.
Level classify(const FormP& f);

// Closed Delta0 formulas. Quantifiers bounded by omega sample 0..fuel-1.
Truth truth_delta0(const FormP& f, const Universe& u);
// Unbounded quantifiers range over u.members.
Truth truth_level(const FormP& f, Level level, const Universe& u);
// Kleene evaluation without a level check.
Truth truth_any(const FormP& f, const Universe& u);
// The disjunction of a sequent.
Truth truth_sequent(const Sequent& s, const Universe& u);

}  // namespace kpref
