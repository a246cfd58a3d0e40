#include "doctest.h"
#include "workbench/cyclo.hpp"
#include "workbench/hensel.hpp"

using namespace wb;

using RQ = RatFunc<Rational>;
using PQ = Poly<RQ>;

static RQ rq(long n) { return RQ::constant(Rational(n)); }

// Y^2 - (1 + t)
static PQ sqrt1pt_poly() {
    return PQ(std::vector<RQ>{-(rq(1) + RQ::variable()), RQ(), rq(1)});
}

TEST_CASE("t-adic valuation") {
    CHECK(t_adic(RQ::variable()) == TAdicValue::finite(1));
    CHECK(t_adic(RQ::variable().inv()) == TAdicValue::finite(-1));
    CHECK(t_adic(rq(7)) == TAdicValue::finite(0));
    CHECK(t_adic(RQ()) == TAdicValue::infinity());
    CHECK(TAdicValue::infinity().str() == "inf");
}

TEST_CASE("Newton lifting of a simple residue root") {
    auto s = hensel_lift(sqrt1pt_poly(), Rational(1), 3);
    CHECK(s.coeff(0) == Rational(1));
    CHECK(s.coeff(1) == Rational(1, 2));
    CHECK(s.coeff(2) == Rational(-1, 8));
    CHECK(s.coeff(3) == Rational(1, 16));
    // the other residue root lifts to the negated series
    auto m = hensel_lift(sqrt1pt_poly(), Rational(-1), 3);
    for (std::size_t i = 0; i <= 3; ++i) CHECK(m.coeff(i) == -s.coeff(i));
}

TEST_CASE("lifting rejects bad inputs") {
    // Y^2 - t: the residue root 0 is not simple
    PQ ramified(std::vector<RQ>{-RQ::variable(), RQ(), rq(1)});
    CHECK_THROWS_AS(hensel_lift(ramified, Rational(0), 4), no_simple_root_error);
    // 0 is not a residue root of Y^2 - (1+t)
    CHECK_THROWS_AS(hensel_lift(sqrt1pt_poly(), Rational(0), 4), no_simple_root_error);
    // non-monic input
    PQ nonmonic(std::vector<RQ>{rq(-1), RQ(), rq(2)});
    CHECK_THROWS_AS(hensel_lift(nonmonic, Rational(1), 4), normalization_error);
    // a coefficient with negative valuation
    PQ polar(std::vector<RQ>{RQ::variable().inv(), RQ(), rq(1)});
    CHECK_THROWS_AS(hensel_lift(polar, Rational(1), 4), normalization_error);
}

TEST_CASE("element arithmetic and exactness detection") {
    auto x = HElem<Rational>::lift(sqrt1pt_poly(), Rational(1));
    CHECK(!x.exact());
    CHECK(x.minpoly().degree() == 2);

    auto dbl = x + x;
    auto w = dbl.laurent(2);
    CHECK(w.coeff(0) == Rational(2));
    CHECK(w.coeff(1) == Rational(1));
    CHECK(w.coeff(2) == Rational(-1, 4));

    auto sq = x * x;
    REQUIRE(sq.exact().has_value());
    CHECK(*sq.exact() == rq(1) + RQ::variable());

    auto z = x - x;
    REQUIRE(z.exact().has_value());
    CHECK(z.exact()->is_zero());

    auto unit = x.inverse() * x;
    CHECK(helem_eq(unit, HElem<Rational>::from_ratfunc(rq(1))));
}

TEST_CASE("provable equality with the discriminant bound") {
    auto x = HElem<Rational>::lift(sqrt1pt_poly(), Rational(1));
    auto y = HElem<Rational>::lift(sqrt1pt_poly(), Rational(-1));
    CHECK(helem_separation_exponent(x, y) == 1);
    CHECK(!helem_eq(x, y));
    CHECK(helem_eq(x, -y));
    CHECK(helem_eq(x + y, HElem<Rational>::from_ratfunc(RQ())));
}

TEST_CASE("valuation and residue of elements") {
    auto x = HElem<Rational>::lift(sqrt1pt_poly(), Rational(1));
    CHECK(helem_valuation(x) == TAdicValue::finite(0));
    CHECK(helem_valuation(x - x) == TAdicValue::infinity());
    auto t = HElem<Rational>::from_ratfunc(RQ::variable());
    CHECK(helem_valuation(t) == TAdicValue::finite(1));

    CHECK(residue(x) == Rational(1));
    CHECK(residue(t) == Rational(0));
    CHECK(!residue(t.inverse()).has_value());
    // t has positive valuation, so x * t has residue 0
    CHECK(residue(x * t) == Rational(0));
}

TEST_CASE("base-field morphisms act on elements") {
    using KC = CycloElt;
    using RC = RatFunc<KC>;
    auto one = RC::constant(KC::rational(Rational(1)));
    Poly<RC> f(std::vector<RC>{-(one + RC::variable()), RC(), one});
    auto x = HElem<KC>::lift(f, KC::rational(Rational(1)));

    // the order-2 automorphism of Q(zeta_3): zeta -> zeta^2
    std::function<KC(const KC&)> conj = [](const KC& c) {
        return KC(c.conductor(), c.poly().compose(Poly<Rational>::x_power(2, Rational(1))));
    };
    std::function<KC(const KC&)> ident = [](const KC& c) { return c; };

    auto zt = HElem<KC>::from_ratfunc(RC(Poly<KC>(std::vector<KC>{KC(), KC::zeta(3)})));
    REQUIRE(zt.mapped(conj).exact().has_value());
    CHECK(*zt.mapped(conj).exact() ==
          RC(Poly<KC>(std::vector<KC>{KC(), KC::zeta(3) * KC::zeta(3)})));

    // rational data is fixed; morphisms respect the arithmetic
    CHECK(helem_eq(x.mapped(conj), x));
    auto sum = x + zt;
    CHECK(helem_eq(sum.mapped(conj), x.mapped(conj) + zt.mapped(conj)));
    CHECK(helem_eq(sum.mapped(ident), sum));
    // applying the conjugation twice is the identity
    CHECK(helem_eq(sum.mapped(conj).mapped(conj), sum));

    // the images agree with mapping the Laurent coefficients
    auto a = sum.laurent(5);
    auto b = sum.mapped(conj).laurent(5);
    for (long e = 0; e <= 5; ++e) CHECK(b.coeff(e) == conj(a.coeff(e)));
}

static HenselConfig small_config() {
    HenselConfig cfg;
    cfg.exact_per_stage = 8;
    cfg.lift_per_stage = 600;
    cfg.closure_window_growth = 1;
    cfg.degree_cap = 4;
    cfg.height_cap = 2;
    cfg.max_lift_degree = 2;
    return cfg;
}

TEST_CASE("henselization stream: constants, generators, adjoined roots") {
    auto q = henselize_rationals(small_config());
    u64 S = 16;
    auto zero = read_op(*q, S, "0", {});
    auto one = read_op(*q, S, "1", {});
    REQUIRE(zero.has_value());
    REQUIRE(one.has_value());
    CHECK(q->representative(*zero).exact()->is_zero());

    auto tc = q->find_code(HElem<Rational>::from_ratfunc(RQ::variable()), S);
    REQUIRE(tc.has_value());

    auto sq = q->find_code(HElem<Rational>::lift(sqrt1pt_poly(), Rational(1)), S);
    auto nsq = q->find_code(HElem<Rational>::lift(sqrt1pt_poly(), Rational(-1)), S);
    REQUIRE(sq.has_value());
    REQUIRE(nsq.has_value());
    CHECK(*sq != *nsq);

    // committed witness that 1 + t has a square root
    auto prod = read_op(*q, S, "*", {*sq, *sq});
    REQUIRE(prod.has_value());
    CHECK(*q->representative(*prod).exact() == rq(1) + RQ::variable());
    CHECK(read_op(*q, S, "+", {*sq, *nsq}) == *zero);

    // but t itself has no committed square root: ramification is refused
    for (u64 c = 0; c < q->code_bound(S); ++c) {
        auto r = read_op(*q, S, "*", {c, c});
        CHECK(!(r.has_value() && *r == *tc));
    }
}

TEST_CASE("henselization stream: audit and identity morphism") {
    auto q = henselize_rationals(small_config());
    CHECK(audit_stream(*q, 10, 6).clean());

    auto q2 = henselize_rationals(small_config());
    auto m = hensel_morphism<Rational>(q, q2, [](const Rational& r) { return r; });
    u64 S = 12;
    for (u64 c = 0; c < std::min<u64>(q->code_bound(S), 8); ++c)
        CHECK(m.map_code(c, S) == c);
}
