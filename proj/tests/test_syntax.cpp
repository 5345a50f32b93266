#include <doctest.h>

#include "kpref/syntax.hpp"
#include "oracle.hpp"

using namespace kpref;

namespace {
OrdNotation N(std::uint64_t n) { return OrdNotation::nat(n); }
const OrdNotation w1 = OrdNotation::pow(N(1));
}  // namespace

TEST_CASE("negate") {
    auto f = parse_formula("(all x (or (mem x {}) (nmem x {})))");
    CHECK(negate(negate(f))->key == f->key);
    CHECK(negate(parse_formula("(mem {} {{}})"))->key == parse_formula("(nmem {} {{}})")->key);
    CHECK(negate(f)->key == parse_formula("(ex x (and (nmem x {}) (mem x {})))")->key);
}

TEST_CASE("formula_rank") {
    CHECK(ord_eq(formula_rank(parse_formula("(mem {} {{}})")), ord_succ(w1)));
    CHECK(ord_eq(formula_rank(parse_formula("(ex x (mem x {}))")), OrdNotation::omega()));
    CHECK(ord_eq(formula_rank(parse_formula("(ball x {{}} (mem x {}))")), ord_add_nat(w1, 3)));
    CHECK(ord_eq(term_rank(t_omega()), OrdNotation::pow(N(2))));
}

TEST_CASE("k_of") {
    auto ks = k_of(parse_formula("(mem {} {{}})"));
    REQUIRE(ks.size() == 2);
    CHECK(ord_eq(ks[0], N(0)));
    CHECK(ord_eq(ks[1], N(1)));
    auto ku = k_of(parse_formula("(ex x (mem x {}))"));
    REQUIRE(ku.size() == 2);
    CHECK(ord_eq(ku[0], N(0)));
    CHECK(ord_eq(ku[1], OrdNotation::omega()));
    auto kw = k_of(parse_formula("(mem omega omega)"));
    REQUIRE(kw.size() == 1);
    CHECK(ord_eq(kw[0], w1));
}

TEST_CASE("decompose") {
    auto a = parse_formula("(mem {} {})"), b = parse_formula("(nmem {} {{}})");
    auto ab = f_and(a, b);
    CHECK(is_conjunctive(ab));
    CHECK(decompose_child(ab, 0)->key == a->key);
    CHECK(decompose_child(ab, 1)->key == b->key);
    auto s = parse_term("{{}}");
    auto bex = parse_formula("(bex x {{},{{}}} (nmem x {}))");
    CHECK(is_disjunctive(bex));
    CHECK(decompose_child(bex, s)->key == parse_formula("(and (mem {{}} {{},{{}}}) (nmem {{}} {}))")->key);
    auto all = parse_formula("(all x (mem x {}))");
    CHECK(decompose_child(all, t_empty())->key == parse_formula("(mem {} {})")->key);
    CHECK(is_atomic(a));
    CHECK_THROWS(decompose_child(ab, 2));
}

TEST_CASE("relativize") {
    auto v2 = parse_term("{{},{{}}}");
    auto f = parse_formula("(ex x (mem x {{}}))");
    CHECK(relativize(f, v2)->key == parse_formula("(bex x {{},{{}}} (mem x {{}}))")->key);
    auto d = parse_formula("(ball x {{}} (mem x {}))");
    CHECK(relativize(d, v2)->key == d->key);
}

TEST_CASE("parse and serialize") {
    auto m = parse_formula("(mem {} {{}})");
    CHECK(m->kind == Formula::Kind::Mem);
    CHECK(m->s->value == HFSet::empty());
    auto u = parse_formula("(forall x (mem x omega))");
    CHECK(u->kind == Formula::Kind::All);
    for (const char* s : {"(and (mem {} {{}}) (ball y { {} } (ex z (mem y z))))", "(eq {} (union {{}}))",
                          "(imp (mem {} {}) (mem (sep x {{}} (mem x x)) {}))",
                          "(not (all x (or (mem x x) (nmem x {}))))"}) {
        auto f = parse_formula(s);
        CHECK(show(parse_formula(show(f))) == show(f));
    }
    auto t = parse_term("(sep x {{}} (mem x x))");
    CHECK(show(parse_term(show(t))) == show(t));
    CHECK_THROWS_AS(parse_formula("(mem {} "), SyntaxError);
    CHECK_THROWS_AS(parse_formula("(frob {} {})"), SyntaxError);
}

TEST_CASE("equality shorthand expands") {
    auto e = parse_formula("(eq {} {{}})");
    CHECK(e->kind == Formula::Kind::And);
    CHECK(e->key == f_eq(t_empty(), parse_term("{{}}"))->key);
}

TEST_CASE("ev_term agrees with the naive evaluator on a few terms") {
    for (const char* s : {"(pair {} {{}})", "(union (pair {{}} {{{}}}))", "(union (union {{{{}}}}))"}) {
        auto t = parse_term(s);
        CHECK(oracle::from_hf(ev_term(t)) == oracle::eval_term(t));
    }
}

TEST_CASE("sequents are sets") {
    auto a = parse_formula("(mem {} {})");
    Sequent s{a, a, negate(a)};
    CHECK(s.size() == 2);
    CHECK(s.with(a) == s);
    CHECK(s.without(a).size() == 1);
}
