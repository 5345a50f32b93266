#pragma once
// Independent reference implementations used only by the tests.

#include <algorithm>
#include <random>
#include <set>
#include <stdexcept>
#include <vector>

#include "kpref/ord.hpp"
#include "kpref/syntax.hpp"

namespace oracle {

// Ordinal below epsilon_0 as a Cantor normal form over naturals: the list of
// exponents, non-increasing.
struct Cnf {
    std::vector<Cnf> exps;
};

inline int cmp(const Cnf& a, const Cnf& b) {
    std::size_t n = std::min(a.exps.size(), b.exps.size());
    for (std::size_t i = 0; i < n; ++i) {
        int c = cmp(a.exps[i], b.exps[i]);
        if (c) return c;
    }
    if (a.exps.size() == b.exps.size()) return 0;
    return a.exps.size() < b.exps.size() ? -1 : 1;
}

inline void sort_desc(std::vector<Cnf>& v) {
    std::stable_sort(v.begin(), v.end(), [](const Cnf& x, const Cnf& y) { return cmp(x, y) > 0; });
}

inline Cnf hsum(const Cnf& a, const Cnf& b) {
    Cnf r;
    r.exps = a.exps;
    r.exps.insert(r.exps.end(), b.exps.begin(), b.exps.end());
    sort_desc(r.exps);
    return r;
}

// Value of an Omega-free, epsilon-free notation. Sums are natural sums.
inline Cnf eval(const kpref::OrdNotation& a) {
    using K = kpref::OrdNotation::Kind;
    switch (a.kind()) {
    case K::Nat: {
        Cnf r;
        r.exps.assign(a.nat_value(), Cnf{});
        return r;
    }
    case K::Pow: {
        Cnf r;
        r.exps.push_back(eval(a.arg()));
        return r;
    }
    case K::Sum: {
        Cnf r;
        for (const auto& p : a.parts()) r = hsum(r, eval(p));
        return r;
    }
    default: throw std::invalid_argument("oracle: notation outside the evaluator");
    }
}

// Every Omega-free, epsilon-free notation of exactly the given size, naturals up to max_nat.
inline std::vector<kpref::OrdNotation> enumerate_size(std::size_t size, unsigned max_nat,
                                                       std::vector<std::vector<kpref::OrdNotation>>& memo) {
    using kpref::OrdNotation;
    if (memo.size() > size && !memo[size].empty()) return memo[size];
    if (memo.size() <= size) memo.resize(size + 1);
    std::vector<OrdNotation> out;
    if (size == 1)
        for (unsigned n = 0; n <= max_nat; ++n) out.push_back(OrdNotation::nat(n));
    if (size >= 2)
        for (const auto& e : enumerate_size(size - 1, max_nat, memo)) out.push_back(OrdNotation::pow(e));
    // Sums: a non-sum, nonzero head followed by a nonzero tail; size = |head| + 1 + |tail|.
    for (std::size_t hs = 1; hs + 2 <= size; ++hs) {
        std::size_t ts = size - hs - 1;
        for (const auto& h : enumerate_size(hs, max_nat, memo)) {
            if (h.is_zero() || h.kind() == OrdNotation::Kind::Sum) continue;
            for (const auto& t : enumerate_size(ts, max_nat, memo)) {
                if (t.is_zero()) continue;
                out.push_back(OrdNotation::sum({h, t}));
            }
        }
    }
    memo[size] = out;
    return out;
}

// Random Omega-free, epsilon-free notation.
inline kpref::OrdNotation random_plain(std::mt19937_64& rng, int depth) {
    using kpref::OrdNotation;
    std::uniform_int_distribution<int> pick(0, depth <= 0 ? 0 : 2);
    switch (pick(rng)) {
    case 0: return OrdNotation::nat(std::uniform_int_distribution<int>(0, 4)(rng));
    case 1: return OrdNotation::pow(random_plain(rng, depth - 1));
    default: {
        int n = std::uniform_int_distribution<int>(2, 4)(rng);
        std::vector<OrdNotation> parts;
        for (int i = 0; i < n; ++i) parts.push_back(random_plain(rng, depth - 1));
        return OrdNotation::sum(parts);
    }
    }
}

// Random notation over the full alphabet, kept below epsilon_{Omega+1}.
inline kpref::OrdNotation random_full(std::mt19937_64& rng, int depth) {
    using kpref::OrdNotation;
    std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 4);
    switch (pick(rng)) {
    case 0: return OrdNotation::nat(std::uniform_int_distribution<int>(0, 3)(rng));
    case 1: return OrdNotation::omega();
    case 2: return OrdNotation::pow(random_full(rng, depth - 1));
    case 3: {
        int n = std::uniform_int_distribution<int>(2, 3)(rng);
        std::vector<OrdNotation> parts;
        for (int i = 0; i < n; ++i) parts.push_back(random_full(rng, depth - 1));
        return OrdNotation::sum(parts);
    }
    default: {
        // eps indices at most Omega keep the value below epsilon_{Omega+1}
        std::uniform_int_distribution<int> ix(0, 2);
        int k = ix(rng);
        return OrdNotation::eps(k == 2 ? OrdNotation::omega() : OrdNotation::nat(k));
    }
    }
}

// Naive sets: a set is the std::set of its elements.
struct NSet {
    std::set<NSet> elems;
    bool operator<(const NSet& o) const { return elems < o.elems; }
    bool operator==(const NSet& o) const { return elems == o.elems; }
};

inline NSet from_hf(const kpref::HFSet& s) {
    if (s.is_omega()) throw std::invalid_argument("oracle: omega");
    NSet r;
    for (const auto& e : s.elems()) r.elems.insert(from_hf(e));
    return r;
}

// Closed terms built from constants, pairs and unions.
inline NSet eval_term(const kpref::TermP& t) {
    using K = kpref::Term::Kind;
    switch (t->kind) {
    case K::Const: return from_hf(t->value);
    case K::Pair: {
        NSet r;
        r.elems.insert(eval_term(t->a));
        r.elems.insert(eval_term(t->b));
        return r;
    }
    case K::Union: {
        NSet r;
        for (const auto& y : eval_term(t->a).elems)
            for (const auto& x : y.elems) r.elems.insert(x);
        return r;
    }
    default: throw std::invalid_argument("oracle: term outside the evaluator");
    }
}

inline unsigned nrank(const NSet& s) {
    unsigned r = 0;
    for (const auto& e : s.elems) r = std::max(r, nrank(e) + 1);
    return r;
}

}  // namespace oracle
