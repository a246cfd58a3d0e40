#include "doctest.h"
#include "workbench/grp2fld.hpp"
#include "workbench/tfab.hpp"

using namespace wb;

namespace {

u64 code_of_value(const StreamPtr& g, const Rational& q, u64 stage) {
    auto vs = std::static_pointer_cast<ValueStream<Rational>>(g);
    auto c = vs->code_of(q, stage);
    REQUIRE(c.has_value());
    return *c;
}

}  // namespace

TEST_CASE("monomial combinations: arithmetic and printing") {
    auto m = MonomialCombination::monomial(5, Rational(3, 2)) + MonomialCombination::monomial(0, Rational(-1));
    CHECK(m.str() == "-1*Y[0] + 3/2*Y[5]");
    CHECK(MonomialCombination().str() == "0");
    CHECK((m - m).is_zero());
    CHECK(m.scale(Rational(0)).is_zero());
    CHECK(m.scale(Rational(2)) == MonomialCombination({{5, Rational(3)}, {0, Rational(-2)}}));
    // cancellation prunes zero coefficients
    auto sum = MonomialCombination::monomial(7) + MonomialCombination::monomial(7, Rational(-1));
    CHECK(sum.is_zero());
}

TEST_CASE("ring_mul is the convolution over committed group facts") {
    auto z = rank1_from_type(DivisibilityType());
    u64 big = 2000;
    u64 c0 = code_of_value(z, Rational(0), big);
    u64 c1 = code_of_value(z, Rational(1), big);
    u64 c2 = code_of_value(z, Rational(2), big);
    u64 c3 = code_of_value(z, Rational(3), big);

    auto p = ring_mul(MonomialCombination::monomial(c1), MonomialCombination::monomial(c2), *z, big);
    REQUIRE(p.has_value());
    CHECK(*p == MonomialCombination::monomial(c3));

    // Y_0 is the multiplicative unit of the ring
    auto u = ring_mul(MonomialCombination::monomial(c0), MonomialCombination::monomial(c2), *z, big);
    REQUIRE(u.has_value());
    CHECK(*u == MonomialCombination::monomial(c2));

    // (Y_1 + Y_2)^2 = Y_2 + 2 Y_3 + Y_4
    u64 c4 = code_of_value(z, Rational(4), big);
    auto s = MonomialCombination::monomial(c1) + MonomialCombination::monomial(c2);
    auto sq = ring_mul(s, s, *z, big);
    REQUIRE(sq.has_value());
    MonomialCombination want({{c2, Rational(1)}, {c3, Rational(2)}, {c4, Rational(1)}});
    CHECK(*sq == want);

    // unknown while the needed sums are uncommitted
    CHECK(!ring_mul(MonomialCombination::monomial(40), MonomialCombination::monomial(41), *z, 1).has_value());
}

TEST_CASE("quotient equality by cross multiplication") {
    auto z = rank1_from_type(DivisibilityType());
    u64 big = 2000;
    u64 c1 = code_of_value(z, Rational(1), big);
    u64 c2 = code_of_value(z, Rational(2), big);
    u64 c3 = code_of_value(z, Rational(3), big);

    FieldQuotient a{MonomialCombination::monomial(c2), MonomialCombination::monomial(c1)};
    FieldQuotient b{MonomialCombination::monomial(c3), MonomialCombination::monomial(c2)};
    CHECK(quotient_eq(a, b, *z, big) == QuotientEq::Equal);  // 2+2 = 3+1

    FieldQuotient c{MonomialCombination::monomial(c3), MonomialCombination::monomial(c1)};
    CHECK(quotient_eq(a, c, *z, big) == QuotientEq::Unequal);

    CHECK(quotient_eq(a, b, *z, 0) == QuotientEq::Unknown);
    FieldQuotient bad{MonomialCombination::monomial(c1), MonomialCombination()};
    CHECK_THROWS_AS(quotient_eq(a, bad, *z, big), std::domain_error);
}

TEST_CASE("the emitted field copy is a clean field diagram") {
    auto z = rank1_from_type(DivisibilityType());
    auto phi = phi_object(z);
    CHECK(phi->sig() == field_signature());
    CHECK(audit_stream(*phi, 60, 6).clean());

    u64 big = 200;
    u64 n = phi->code_bound(big);
    CHECK(n >= 3);
    // locate zero and one among the committed representatives
    auto zero = read_op(*phi, big, "0", {});
    auto one = read_op(*phi, big, "1", {});
    REQUIRE(zero.has_value());
    REQUIRE(one.has_value());
    CHECK(*zero != *one);
    for (u64 c = 0; c < std::min<u64>(n, 6); ++c) {
        auto plus = read_op(*phi, big, "+", {*zero, c});
        if (plus) CHECK(*plus == c);
        auto times = read_op(*phi, big, "*", {*one, c});
        if (times) CHECK(*times == c);
        auto diff = read_op(*phi, big, "-", {c, c});
        if (diff) CHECK(*diff == *zero);
    }
    // multiplication commutes where committed
    for (u64 a = 0; a < std::min<u64>(n, 5); ++a)
        for (u64 b = 0; b < a; ++b) {
            auto ab = read_op(*phi, big, "*", {a, b});
            auto ba = read_op(*phi, big, "*", {b, a});
            if (ab && ba) CHECK(*ab == *ba);
        }

    auto probe = zero_divisor_probe(300, *z, 1000, 7);
    CHECK(probe.clean());
    CHECK(probe.products_checked > 100);
}

TEST_CASE("monomial map lands in the field copy") {
    auto z = rank1_from_type(DivisibilityType());
    auto phi = phi_object(z);
    u64 big = 2000;
    u64 c1 = code_of_value(z, Rational(1), big);
    auto x = monomial_map(c1, *z, big);
    REQUIRE(x.has_value());
    // X * X = Y_{1+1}/Y_0
    auto xx = quotient_mul(*x, *x, *z, big);
    REQUIRE(xx.has_value());
    u64 c2 = code_of_value(z, Rational(2), big);
    auto y2 = monomial_map(c2, *z, big);
    REQUIRE(y2.has_value());
    CHECK(quotient_eq(*xx, *y2, *z, big) == QuotientEq::Equal);
    (void)phi;
}

TEST_CASE("root evidence distinguishes divisible and non-divisible units") {
    u64 big = 3000;
    auto z = rank1_from_type(DivisibilityType());
    u64 unit_z = code_of_value(z, Rational(1), big);
    CHECK(!root_of_x_evidence(*z, unit_z, 2, big));
    CHECK(!root_of_x_evidence(*z, unit_z, 3, big));

    auto dyadic = rank1_from_type(DivisibilityType::from_entries({{2, kInfinity}}));
    u64 unit_d = code_of_value(dyadic, Rational(1), big);
    CHECK(root_of_x_evidence(*dyadic, unit_d, 2, big));
    CHECK(!root_of_x_evidence(*dyadic, unit_d, 3, big));
}

TEST_CASE("morphism action: permuted copies induce field morphisms") {
    auto g0 = rank1_from_type(DivisibilityType());
    FiniteSupportPermutation p(std::map<u64, u64>{{1, 2}, {2, 4}, {4, 1}});
    auto g1 = permute_stream(g0, p);
    auto f0 = phi_object(g0);
    auto f1 = phi_object(g1);
    auto mor = phi_morphism(f0, [&](u64 c) -> std::optional<u64> { return p(c); }, f1);
    u64 big = 120;
    CHECK_NOTHROW(mor.validate(big, 10));

    // the code action respects committed addition
    u64 n0 = f0->code_bound(big);
    int checked = 0;
    for (u64 a = 0; a < n0 && checked < 20; ++a)
        for (u64 b = 0; b < n0 && checked < 20; ++b) {
            auto c = read_op(*f0, big, "+", {a, b});
            if (!c) continue;
            auto ma = mor.map_code(a, big), mb = mor.map_code(b, big), mc = mor.map_code(*c, big);
            if (!ma || !mb || !mc) continue;
            auto img = read_op(*f1, big, "+", {*ma, *mb});
            if (img) {
                CHECK(*img == *mc);
                ++checked;
            }
        }
    CHECK(checked > 0);

    // a map that is not a homomorphism on committed facts is rejected
    auto swap_two = [&](u64 c) -> std::optional<u64> {
        if (c == 0) return 1;
        if (c == 1) return 0;
        return c;
    };
    auto bad = phi_morphism(f0, swap_two, f0);
    CHECK_THROWS_AS(bad.validate(big, 10), morphism_violation_error);
}

TEST_CASE("identity morphism fixes every representative code") {
    auto g = rank1_from_type(DivisibilityType::uniform(1));
    auto phi = phi_object(g);
    auto ident = phi_morphism(phi, [](u64 c) -> std::optional<u64> { return c; }, phi);
    u64 big = 80;
    CHECK_NOTHROW(ident.validate(big, 8));
    for (u64 c = 0; c < phi->code_bound(big); ++c) {
        auto m = ident.map_code(c, big);
        REQUIRE(m.has_value());
        CHECK(*m == c);
    }
}
