#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace kpref {

// Symbolic ordinal below (and including) epsilon_{Omega+1}.
// A Sum denotes the natural sum of its parts, so part order carries no meaning
// for the value; normalize_cnf puts parts in non-increasing exponent order.
class OrdNotation {
public:
    enum class Kind { Nat, Omega, Sum, Pow, Eps };

    OrdNotation();  // Nat(0)

    static OrdNotation nat(std::uint64_t n);
    static OrdNotation omega();              // the uncountable constant
    static OrdNotation pow(OrdNotation e);   // omega^e
    static OrdNotation eps(OrdNotation i);   // epsilon_i
    // Flattens nested sums and drops zero parts; a single part collapses.
    static OrdNotation sum(std::vector<OrdNotation> parts);

    Kind kind() const { return kind_; }
    bool is_nat() const { return kind_ == Kind::Nat; }
    bool is_zero() const { return kind_ == Kind::Nat && n_ == 0; }
    std::uint64_t nat_value() const { return n_; }
    const OrdNotation& arg() const { return *arg_; }
    const std::vector<OrdNotation>& parts() const { return *parts_; }

    // Structural identity (the "same string of symbols" relation).
    bool identical(const OrdNotation& o) const;
    bool contains_omega() const;
    std::size_t size() const;
    std::string str() const;

private:
    Kind kind_ = Kind::Nat;
    std::uint64_t n_ = 0;
    std::shared_ptr<const OrdNotation> arg_;
    std::shared_ptr<const std::vector<OrdNotation>> parts_;
};

enum class CmpResult { Less, Equal, Greater };

struct OrdError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

CmpResult compare(const OrdNotation& a, const OrdNotation& b);
int cmp_sign(const OrdNotation& a, const OrdNotation& b);
inline bool ord_lt(const OrdNotation& a, const OrdNotation& b) { return cmp_sign(a, b) < 0; }
inline bool ord_le(const OrdNotation& a, const OrdNotation& b) { return cmp_sign(a, b) <= 0; }
inline bool ord_eq(const OrdNotation& a, const OrdNotation& b) { return cmp_sign(a, b) == 0; }
const OrdNotation& ord_max(const OrdNotation& a, const OrdNotation& b);

// Exponents of the Cantor normal form in non-increasing order.
// Nat(k) contributes k zero exponents, Omega contributes Omega, eps_a contributes eps_a.
std::vector<OrdNotation> cnf_exponents(const OrdNotation& a);

OrdNotation normalize_cnf(const OrdNotation& a);
OrdNotation natural_sum(const OrdNotation& a, const OrdNotation& b);
OrdNotation e_tower(std::uint64_t n);

struct BelowEps {
    bool flag = false;
    std::optional<std::uint64_t> witness;
};
BelowEps below_eps_omega_plus_1(const OrdNotation& a);

OrdNotation phi0_iterate(std::uint64_t k, const OrdNotation& a);
OrdNotation omega_mul_left(const OrdNotation& a);

// Ordinary (non-commutative) ordinal addition.
OrdNotation ord_add(const OrdNotation& a, const OrdNotation& b);
OrdNotation ord_succ(const OrdNotation& a);
OrdNotation ord_add_nat(const OrdNotation& a, std::uint64_t n);
// omega * a, distributed over the Cantor normal form of a.
OrdNotation omega_times(const OrdNotation& a);
bool is_successor(const OrdNotation& a);
// Requires is_successor(a).
OrdNotation ord_pred(const OrdNotation& a);

// Text form: 0, 3, W, w^(...), e(...), a + b.
OrdNotation parse_ord(std::string_view text);

inline OrdNotation omega_plus(std::uint64_t m) {
    return m == 0 ? OrdNotation::omega() : OrdNotation::sum({OrdNotation::omega(), OrdNotation::nat(m)});
}

}  // namespace kpref
