#include "kpref/hfset.hpp"

#include <algorithm>
#include <map>
#include <mutex>

namespace kpref {

HFSet::HFSet() {
    static const auto empty_rep = [] {
        auto r = std::make_shared<Rep>();
        r->key = "{}";
        r->natural = 0;
        return std::shared_ptr<const Rep>(r);
    }();
    rep_ = empty_rep;
}

HFSet HFSet::omega() {
    static const auto rep = [] {
        auto r = std::make_shared<Rep>();
        r->omega = true;
        r->key = "omega";
        r->rank_omega = true;
        return std::shared_ptr<const Rep>(r);
    }();
    return HFSet(rep);
}

HFSet HFSet::of(std::vector<HFSet> elems) {
    std::sort(elems.begin(), elems.end());
    elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
    if (elems.empty()) return HFSet();
    auto r = std::make_shared<Rep>();
    r->key = "{";
    bool all_nat = true;
    std::uint64_t max_nat = 0;
    for (std::size_t i = 0; i < elems.size(); ++i) {
        const auto& e = elems[i];
        if (i) r->key += ",";
        r->key += e.key();
        if (e.as_natural())
            max_nat = std::max(max_nat, *e.as_natural());
        else
            all_nat = false;
        bool om = e.rank_has_omega();
        std::uint64_t n = e.rank_finite();
        if (om > r->rank_omega || (om == r->rank_omega && n + 1 > r->rank_n)) {
            r->rank_omega = om;
            r->rank_n = n + 1;
        }
    }
    r->key += "}";
    if (all_nat && max_nat + 1 == elems.size()) r->natural = elems.size();
    r->elems = std::move(elems);
    return HFSet(std::shared_ptr<const Rep>(r));
}

HFSet HFSet::natural(std::uint64_t n) {
    static std::mutex mu;
    static std::vector<HFSet> cache{HFSet()};
    std::lock_guard<std::mutex> lock(mu);
    while (cache.size() <= n) cache.push_back(of(cache));
    return cache[n];
}

bool HFSet::contains(const HFSet& x) const {
    if (rep_->omega) return x.as_natural().has_value();
    const auto& es = rep_->elems;
    auto it = std::lower_bound(es.begin(), es.end(), x);
    return it != es.end() && *it == x;
}

OrdNotation hf_rank(const HFSet& s) {
    if (!s.rank_has_omega()) return OrdNotation::nat(s.rank_finite());
    return OrdNotation::sum({OrdNotation::pow(OrdNotation::nat(1)), OrdNotation::nat(s.rank_finite())});
}

HFSet hf_union(const HFSet& s) {
    if (s.is_omega()) return s;
    bool has_omega = false;
    std::vector<HFSet> out;
    for (const auto& e : s.elems()) {
        if (e.is_omega()) {
            has_omega = true;
            continue;
        }
        for (const auto& x : e.elems()) out.push_back(x);
    }
    if (has_omega) {
        for (const auto& e : s.elems())
            if (!e.is_omega() && !e.as_natural())
                throw EvalError("union of omega with a non-natural is outside the evaluable universe");
        return HFSet::omega();
    }
    return HFSet::of(std::move(out));
}

namespace {

struct SetParser {
    const std::string& s;
    std::size_t i = 0;
    void skip() {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\n')) ++i;
    }
    [[noreturn]] void fail(const std::string& m) {
        throw std::runtime_error("set literal error at offset " + std::to_string(i) + ": " + m);
    }
    HFSet parse() {
        skip();
        if (s.compare(i, 5, "omega") == 0) {
            i += 5;
            return HFSet::omega();
        }
        if (i >= s.size() || s[i] != '{') fail("expected '{'");
        ++i;
        std::vector<HFSet> es;
        skip();
        if (i < s.size() && s[i] == '}') {
            ++i;
            return HFSet();
        }
        for (;;) {
            es.push_back(parse());
            skip();
            if (i < s.size() && s[i] == ',') {
                ++i;
                continue;
            }
            if (i < s.size() && s[i] == '}') {
                ++i;
                break;
            }
            fail("expected ',' or '}'");
        }
        return HFSet::of(std::move(es));
    }
};

}  // namespace

HFSet parse_set(const std::string& text) {
    SetParser p{text};
    HFSet r = p.parse();
    p.skip();
    if (p.i != text.size()) p.fail("trailing input");
    return r;
}

std::vector<HFSet> v_level(unsigned k) {
    std::vector<HFSet> level;  // V_0 is empty
    for (unsigned j = 0; j < k; ++j) {
        if (level.size() > 16) throw std::runtime_error("universe rank too large");
        std::vector<HFSet> next;
        std::size_t n = level.size();
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
            std::vector<HFSet> es;
            for (std::size_t b = 0; b < n; ++b)
                if (mask >> b & 1) es.push_back(level[b]);
            next.push_back(HFSet::of(std::move(es)));
        }
        std::sort(next.begin(), next.end());
        level = std::move(next);
    }
    return level;
}

Universe Universe::make(unsigned k, std::uint64_t fuel) {
    Universe u;
    u.rank_bound = k;
    u.omega_fuel = fuel;
    u.members = v_level(k);
    return u;
}

}  // namespace kpref
