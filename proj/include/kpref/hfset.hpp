#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "kpref/ord.hpp"

namespace kpref {

// Hereditarily finite set, or the distinguished set of all naturals.
class HFSet {
public:
    HFSet();  // empty set

    static HFSet empty() { return HFSet(); }
    static HFSet omega();
    static HFSet of(std::vector<HFSet> elems);
    static HFSet natural(std::uint64_t n);  // von Neumann

    bool is_omega() const { return rep_->omega; }
    bool is_empty() const { return !rep_->omega && rep_->elems.empty(); }
    // Elements of a finite set; empty for omega.
    const std::vector<HFSet>& elems() const { return rep_->elems; }
    const std::string& key() const { return rep_->key; }
    std::optional<std::uint64_t> as_natural() const { return rep_->natural; }
    bool contains(const HFSet& x) const;
    // Rank is omega * omega_part + finite_part.
    bool rank_has_omega() const { return rep_->rank_omega; }
    std::uint64_t rank_finite() const { return rep_->rank_n; }

    bool operator==(const HFSet& o) const { return rep_ == o.rep_ || rep_->key == o.rep_->key; }
    bool operator!=(const HFSet& o) const { return !(*this == o); }
    bool operator<(const HFSet& o) const { return rep_->key < o.rep_->key; }

private:
    struct Rep {
        bool omega = false;
        std::vector<HFSet> elems;
        std::string key;
        std::optional<std::uint64_t> natural;
        bool rank_omega = false;
        std::uint64_t rank_n = 0;
    };
    explicit HFSet(std::shared_ptr<const Rep> r) : rep_(std::move(r)) {}
    std::shared_ptr<const Rep> rep_;
};

OrdNotation hf_rank(const HFSet& s);
HFSet hf_union(const HFSet& s);  // throws EvalError on unsupported shapes
HFSet parse_set(const std::string& text);

struct EvalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Universe {
    unsigned rank_bound = 4;
    std::uint64_t omega_fuel = 8;
    std::vector<HFSet> members;

    static Universe make(unsigned k, std::uint64_t fuel);
};

// All sets of rank below k, sorted by key.
std::vector<HFSet> v_level(unsigned k);

}  // namespace kpref
