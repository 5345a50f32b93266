#pragma once

#include <functional>
#include <string>

#include "kpref/rsderiv.hpp"

namespace kpref {

struct TransformError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Emitted once per transformer application, inner lazy ones included.
struct TransformEvent {
    std::string op;  // wkn, inv, red, cutelim
    DerivP out;
    Sequent expected_end;
    OrdNotation length_cap;
    OrdNotation rank_cap;
};
using TransformHook = std::function<void(const TransformEvent&)>;
// Installs a process-wide observer; pass nullptr to remove.
void set_transform_hook(TransformHook hook);

// End(w) plus extra.
DerivP wkn(const Sequent& extra, const DerivP& w);
// Weaken w up to exactly `target` (End(w) must be a subset).
DerivP fit(const DerivP& w, const Sequent& target);
// End(w) without A, plus A_i. A must be conjunctive and not Delta0.
DerivP inv(const FormP& a, const DerivP& w, const Index& i);
// w0 ends within gamma+C, w1 within gamma+not C; the result ends in gamma.
DerivP red(const FormP& c, const DerivP& w0, const DerivP& w1, const Sequent& gamma);
// Input rank bound must be r+1 with r above Omega; the result has rank r.
DerivP cut_elim(const DerivP& w);

}  // namespace kpref
