#include "kpref/ord.hpp"

#include <algorithm>
#include <cctype>

namespace kpref {

OrdNotation::OrdNotation() = default;

OrdNotation OrdNotation::nat(std::uint64_t n) {
    OrdNotation o;
    o.kind_ = Kind::Nat;
    o.n_ = n;
    return o;
}

OrdNotation OrdNotation::omega() {
    OrdNotation o;
    o.kind_ = Kind::Omega;
    return o;
}

OrdNotation OrdNotation::pow(OrdNotation e) {
    OrdNotation o;
    o.kind_ = Kind::Pow;
    o.arg_ = std::make_shared<const OrdNotation>(std::move(e));
    return o;
}

OrdNotation OrdNotation::eps(OrdNotation i) {
    OrdNotation o;
    o.kind_ = Kind::Eps;
    o.arg_ = std::make_shared<const OrdNotation>(std::move(i));
    return o;
}

OrdNotation OrdNotation::sum(std::vector<OrdNotation> parts) {
    std::vector<OrdNotation> flat;
    for (auto& p : parts) {
        if (p.kind_ == Kind::Sum) {
            for (const auto& q : *p.parts_) flat.push_back(q);
        } else if (!p.is_zero()) {
            flat.push_back(std::move(p));
        }
    }
    if (flat.empty()) return nat(0);
    if (flat.size() == 1) return flat.front();
    OrdNotation o;
    o.kind_ = Kind::Sum;
    o.parts_ = std::make_shared<const std::vector<OrdNotation>>(std::move(flat));
    return o;
}

bool OrdNotation::identical(const OrdNotation& o) const {
    if (kind_ != o.kind_) return false;
    switch (kind_) {
    case Kind::Nat: return n_ == o.n_;
    case Kind::Omega: return true;
    case Kind::Pow:
    case Kind::Eps: return arg_->identical(*o.arg_);
    case Kind::Sum:
        if (parts_->size() != o.parts_->size()) return false;
        for (std::size_t i = 0; i < parts_->size(); ++i)
            if (!(*parts_)[i].identical((*o.parts_)[i])) return false;
        return true;
    }
    return false;
}

bool OrdNotation::contains_omega() const {
    switch (kind_) {
    case Kind::Nat: return false;
    case Kind::Omega: return true;
    case Kind::Pow:
    case Kind::Eps: return arg_->contains_omega();
    case Kind::Sum:
        return std::any_of(parts_->begin(), parts_->end(), [](const OrdNotation& p) { return p.contains_omega(); });
    }
    return false;
}

std::size_t OrdNotation::size() const {
    switch (kind_) {
    case Kind::Nat:
    case Kind::Omega: return 1;
    case Kind::Pow:
    case Kind::Eps: return 1 + arg_->size();
    case Kind::Sum: {
        std::size_t s = parts_->size() - 1;
        for (const auto& p : *parts_) s += p.size();
        return s;
    }
    }
    return 1;
}

std::string OrdNotation::str() const {
    switch (kind_) {
    case Kind::Nat: return std::to_string(n_);
    case Kind::Omega: return "W";
    case Kind::Pow: return "w^(" + arg_->str() + ")";
    case Kind::Eps: return "e(" + arg_->str() + ")";
    case Kind::Sum: {
        std::string s;
        for (std::size_t i = 0; i < parts_->size(); ++i) {
            if (i) s += " + ";
            s += (*parts_)[i].str();
        }
        return s;
    }
    }
    return "?";
}

namespace {

using K = OrdNotation::Kind;

// Value of an Omega-free notation if it is finite.
std::optional<std::uint64_t> finite_value(const OrdNotation& a) {
    switch (a.kind()) {
    case K::Nat: return a.nat_value();
    case K::Omega:
    case K::Eps: return std::nullopt;
    case K::Pow: {
        auto e = finite_value(a.arg());
        if (e && *e == 0) return 1;
        return std::nullopt;
    }
    case K::Sum: {
        std::uint64_t s = 0;
        for (const auto& p : a.parts()) {
            auto v = finite_value(p);
            if (!v) return std::nullopt;
            if (s > UINT64_MAX - *v) return std::nullopt;
            s += *v;
        }
        return s;
    }
    }
    return std::nullopt;
}

int sgn_u(std::uint64_t x, std::uint64_t y) { return x < y ? -1 : (x > y ? 1 : 0); }

int cmp(const OrdNotation& a, const OrdNotation& b);

// sign of (x - n) for a natural constant n
int cmp_with_nat(const OrdNotation& x, std::uint64_t n) {
    if (x.is_nat()) return sgn_u(x.nat_value(), n);
    if (x.contains_omega()) return 1;
    auto v = finite_value(x);
    if (!v) return 1;
    return sgn_u(*v, n);
}

int cmp_with_omega(const OrdNotation& x);

// leading exponent of a nonzero notation
OrdNotation lead_exponent(const OrdNotation& a) {
    auto ex = cnf_exponents(a);
    if (ex.empty()) throw OrdError("zero has no leading exponent");
    return ex.front();
}

// sign of (x - Omega)
int cmp_with_omega(const OrdNotation& x) {
    switch (x.kind()) {
    case K::Nat: return -1;
    case K::Omega: return 0;
    case K::Pow:
    case K::Eps: return cmp(x.arg(), OrdNotation::omega());
    case K::Sum: {
        // b1 + b2 with b1 the leading CNF term: below Omega iff b1 is, otherwise above
        // (b1 = Omega forces b > Omega since b2 > 0).
        int c = cmp(lead_exponent(x), OrdNotation::omega());
        return c < 0 ? -1 : 1;
    }
    }
    return 0;
}

// sign of (x - e) where e is an epsilon term and x is a Sum or Pow
int cmp_with_eps(const OrdNotation& x, const OrdNotation& e) {
    if (x.kind() == K::Pow) return cmp(x.arg(), e);
    int c = cmp(lead_exponent(x), e);
    return c < 0 ? -1 : 1;
}

int cmp_cnf(const OrdNotation& a, const OrdNotation& b) {
    auto ea = cnf_exponents(a);
    auto eb = cnf_exponents(b);
    std::size_t n = std::min(ea.size(), eb.size());
    for (std::size_t i = 0; i < n; ++i) {
        int c = cmp(ea[i], eb[i]);
        if (c) return c;
    }
    return sgn_u(ea.size(), eb.size());
}

int cmp(const OrdNotation& a, const OrdNotation& b) {
    if (a.is_nat()) return -cmp_with_nat(b, a.nat_value());
    if (b.is_nat()) return cmp_with_nat(a, b.nat_value());
    if (a.kind() == K::Omega) return -cmp_with_omega(b);
    if (b.kind() == K::Omega) return cmp_with_omega(a);
    if (a.kind() == K::Eps && b.kind() == K::Eps) return cmp(a.arg(), b.arg());
    if (a.kind() == K::Eps) return -cmp_with_eps(b, a);
    if (b.kind() == K::Eps) return cmp_with_eps(a, b);
    if (a.kind() == K::Pow && b.kind() == K::Pow) return cmp(a.arg(), b.arg());
    return cmp_cnf(a, b);
}

void push_exponents(const OrdNotation& a, std::vector<OrdNotation>& out) {
    switch (a.kind()) {
    case K::Nat:
        for (std::uint64_t i = 0; i < a.nat_value(); ++i) out.push_back(OrdNotation::nat(0));
        break;
    case K::Omega:
    case K::Eps: out.push_back(a); break;
    case K::Pow: out.push_back(a.arg()); break;
    case K::Sum:
        for (const auto& p : a.parts()) push_exponents(p, out);
        break;
    }
}

// Exponent of a single omega-power shaped part.
OrdNotation part_exponent(const OrdNotation& p) {
    switch (p.kind()) {
    case K::Nat: return OrdNotation::nat(0);
    case K::Omega:
    case K::Eps: return p;
    case K::Pow: return p.arg();
    case K::Sum: break;
    }
    throw OrdError("sum is not a single part");
}

std::vector<OrdNotation> sorted_parts(const OrdNotation& a) {
    std::vector<OrdNotation> parts;
    if (a.kind() == K::Sum)
        parts = a.parts();
    else if (!a.is_zero())
        parts.push_back(a);
    std::stable_sort(parts.begin(), parts.end(), [](const OrdNotation& x, const OrdNotation& y) {
        return cmp(part_exponent(x), part_exponent(y)) > 0;
    });
    return parts;
}

OrdNotation from_exponents(const std::vector<OrdNotation>& ex) {
    if (ex.empty()) return OrdNotation::nat(0);
    std::vector<OrdNotation> parts;
    for (const auto& e : ex) parts.push_back(OrdNotation::pow(e));
    return OrdNotation::sum(std::move(parts));
}

OrdNotation merge_nats(std::vector<OrdNotation> parts) {
    std::vector<OrdNotation> out;
    for (auto& p : parts) {
        if (p.is_nat() && !out.empty() && out.back().is_nat())
            out.back() = OrdNotation::nat(out.back().nat_value() + p.nat_value());
        else
            out.push_back(std::move(p));
    }
    return OrdNotation::sum(std::move(out));
}

}  // namespace

int cmp_sign(const OrdNotation& a, const OrdNotation& b) { return cmp(a, b); }

CmpResult compare(const OrdNotation& a, const OrdNotation& b) {
    int c = cmp(a, b);
    return c < 0 ? CmpResult::Less : (c > 0 ? CmpResult::Greater : CmpResult::Equal);
}

const OrdNotation& ord_max(const OrdNotation& a, const OrdNotation& b) { return cmp(a, b) >= 0 ? a : b; }

std::vector<OrdNotation> cnf_exponents(const OrdNotation& a) {
    std::vector<OrdNotation> ex;
    push_exponents(a, ex);
    std::stable_sort(ex.begin(), ex.end(), [](const OrdNotation& x, const OrdNotation& y) { return cmp(x, y) > 0; });
    return ex;
}

OrdNotation normalize_cnf(const OrdNotation& a) { return from_exponents(cnf_exponents(a)); }

OrdNotation natural_sum(const OrdNotation& a, const OrdNotation& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    auto ea = cnf_exponents(a);
    auto eb = cnf_exponents(b);
    std::vector<OrdNotation> merged;
    merged.reserve(ea.size() + eb.size());
    std::size_t i = 0, j = 0;
    while (i < ea.size() || j < eb.size()) {
        if (j == eb.size() || (i < ea.size() && cmp(ea[i], eb[j]) >= 0))
            merged.push_back(ea[i++]);
        else
            merged.push_back(eb[j++]);
    }
    return from_exponents(merged);
}

OrdNotation e_tower(std::uint64_t n) {
    OrdNotation e = OrdNotation::sum({OrdNotation::omega(), OrdNotation::nat(1)});
    for (std::uint64_t i = 0; i < n; ++i) e = OrdNotation::pow(e);
    return e;
}

BelowEps below_eps_omega_plus_1(const OrdNotation& a) {
    BelowEps r;
    const OrdNotation top = OrdNotation::eps(e_tower(0));
    if (cmp(a, top) >= 0) return r;
    r.flag = true;
    // The notation size bounds the tower height needed; the loop limit is a guard only.
    OrdNotation e = e_tower(0);
    for (std::uint64_t n = 0; n <= a.size() + 4; ++n) {
        if (cmp(a, e) < 0) {
            r.witness = n;
            return r;
        }
        e = OrdNotation::pow(e);
    }
    throw OrdError("no tower level found below epsilon_{Omega+1} for " + a.str());
}

OrdNotation phi0_iterate(std::uint64_t k, const OrdNotation& a) {
    OrdNotation r = a;
    for (std::uint64_t i = 0; i < k; ++i) r = OrdNotation::pow(r);
    return r;
}

OrdNotation ord_add(const OrdNotation& a, const OrdNotation& b) {
    if (b.is_zero()) return a;
    if (a.is_zero()) return b;
    auto pa = sorted_parts(a);
    auto pb = sorted_parts(b);
    const OrdNotation lead = part_exponent(pb.front());
    while (!pa.empty() && cmp(part_exponent(pa.back()), lead) < 0) pa.pop_back();
    for (auto& p : pb) pa.push_back(std::move(p));
    return merge_nats(std::move(pa));
}

OrdNotation ord_succ(const OrdNotation& a) { return ord_add(a, OrdNotation::nat(1)); }

OrdNotation ord_add_nat(const OrdNotation& a, std::uint64_t n) { return ord_add(a, OrdNotation::nat(n)); }

namespace {

// omega^p * a for p > 0, using omega^p * omega^c = omega^(p + c).
OrdNotation power_times(const OrdNotation& p, const OrdNotation& a, bool omega_atom) {
    std::vector<OrdNotation> out;
    for (const auto& part : sorted_parts(a)) {
        if (part.is_nat()) {
            for (std::uint64_t i = 0; i < part.nat_value(); ++i)
                out.push_back(omega_atom ? OrdNotation::omega() : OrdNotation::pow(p));
            continue;
        }
        const OrdNotation c = part_exponent(part);
        if (c.is_zero() && omega_atom)
            out.push_back(OrdNotation::omega());
        else
            out.push_back(OrdNotation::pow(ord_add(p, c)));
    }
    return OrdNotation::sum(std::move(out));
}

}  // namespace

OrdNotation omega_mul_left(const OrdNotation& a) { return power_times(OrdNotation::omega(), a, true); }

OrdNotation omega_times(const OrdNotation& a) { return power_times(OrdNotation::nat(1), a, false); }

bool is_successor(const OrdNotation& a) {
    auto ex = cnf_exponents(a);
    return !ex.empty() && cmp(ex.back(), OrdNotation::nat(0)) == 0;
}

OrdNotation ord_pred(const OrdNotation& a) {
    if (!is_successor(a)) throw OrdError("not a successor: " + a.str());
    auto parts = sorted_parts(a);
    auto& last = parts.back();
    if (last.is_nat() && last.nat_value() > 1)
        last = OrdNotation::nat(last.nat_value() - 1);
    else
        parts.pop_back();
    return OrdNotation::sum(std::move(parts));
}

namespace {

struct OrdParser {
    std::string_view s;
    std::size_t i = 0;

    [[noreturn]] void fail(const std::string& msg) const {
        throw OrdError("ordinal syntax error at offset " + std::to_string(i) + ": " + msg);
    }
    void skip() {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    }
    bool eat(std::string_view tok) {
        skip();
        if (s.substr(i, tok.size()) == tok) {
            i += tok.size();
            return true;
        }
        return false;
    }
    void expect(std::string_view tok) {
        if (!eat(tok)) fail("expected '" + std::string(tok) + "'");
    }
    OrdNotation parse_sum() {
        std::vector<OrdNotation> parts{parse_atom()};
        while (eat("+")) parts.push_back(parse_atom());
        return OrdNotation::sum(std::move(parts));
    }
    OrdNotation parse_atom() {
        skip();
        if (i >= s.size()) fail("unexpected end of input");
        char c = s[i];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::uint64_t v = 0;
            while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) v = v * 10 + (s[i++] - '0');
            return OrdNotation::nat(v);
        }
        if (eat("W")) return OrdNotation::omega();
        if (eat("w^(")) {
            auto e = parse_sum();
            expect(")");
            return OrdNotation::pow(std::move(e));
        }
        if (eat("e(")) {
            auto e = parse_sum();
            expect(")");
            return OrdNotation::eps(std::move(e));
        }
        if (eat("(")) {
            auto e = parse_sum();
            expect(")");
            return e;
        }
        fail(std::string("unexpected character '") + c + "'");
    }
};

}  // namespace

OrdNotation parse_ord(std::string_view text) {
    OrdParser p{text};
    auto r = p.parse_sum();
    p.skip();
    if (p.i != text.size()) p.fail("trailing input");
    return r;
}

}  // namespace kpref
