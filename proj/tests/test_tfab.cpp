#include "doctest.h"
#include "workbench/tfab.hpp"

using namespace wb;

TEST_CASE("eventually periodic streams and decidable E0") {
    BitStream zeros = BitStream::constant(0);
    BitStream ones = BitStream::constant(1);
    BitStream evens = BitStream::characteristic_of_evens();
    CHECK(zeros.at(0) == 0);
    CHECK(evens.at(0) == 1);
    CHECK(evens.at(1) == 0);
    CHECK(evens.at(100) == 1);

    CHECK(e0_equivalent(zeros, zeros));
    CHECK(!e0_equivalent(zeros, ones));
    CHECK(!e0_equivalent(zeros, evens));

    BitStream flipped = zeros.with_flipped({3, 17});
    CHECK(flipped.at(3) == 1);
    CHECK(flipped.at(17) == 1);
    CHECK(flipped.at(4) == 0);
    CHECK(e0_equivalent(zeros, flipped));
    BitStream eflip = evens.with_flipped({0, 5});
    CHECK(eflip.at(0) == 0);
    CHECK(eflip.at(5) == 1);
    CHECK(eflip.at(6) == 1);
    CHECK(e0_equivalent(evens, eflip));
    CHECK(!e0_equivalent(zeros, eflip));
}

TEST_CASE("type literals") {
    auto t = parse_type_literal("2:inf,3:1,5:0");
    CHECK(t.limit(2) == kInfinity);
    CHECK(t.limit(3) == 1);
    CHECK(t.limit(5) == 0);
    CHECK(t.limit(7) == 0);
    CHECK(t.approx(2, 5) == 5);
    CHECK(t.approx(3, 5) == 1);
    CHECK_THROWS_AS(parse_type_literal("4:1"), std::domain_error);
    CHECK(format_type_prefix(t, 10, 3) == "2:inf,3:1,5:0");
}

TEST_CASE("rank1_from_type: Z, the all-primes-once group, Z[1/2]") {
    u64 big = 1500;

    auto z = rank1_from_type(DivisibilityType());
    for (u64 c = 0; c < z->code_bound(big); ++c) CHECK(z->value(c).is_integer());
    CHECK(z->code_of(Rational(5), big).has_value());
    CHECK(!z->code_of(Rational(1, 2), big).has_value());

    auto g = rank1_from_type(DivisibilityType::uniform(1));
    CHECK(g->code_of(Rational(1, 2), big).has_value());
    CHECK(g->code_of(Rational(1, 3), big).has_value());
    CHECK(g->code_of(Rational(1, 6), big).has_value());
    CHECK(!g->code_of(Rational(1, 4), big).has_value());

    auto dyadic = rank1_from_type(DivisibilityType::from_entries({{2, kInfinity}}));
    CHECK(dyadic->code_of(Rational(1, 8), big).has_value());
    CHECK(!dyadic->code_of(Rational(1, 3), big).has_value());
    CHECK(audit_stream(*dyadic, 200, 12).clean());
}

TEST_CASE("iso_rank1 verdicts") {
    auto zero = DivisibilityType();
    auto one_prime = DivisibilityType::from_entries({{2, 1}});
    auto all_once = DivisibilityType::uniform(1);
    auto even_idx = DivisibilityType::from_bits(BitStream::characteristic_of_evens());

    CHECK(iso_rank1(zero, zero, 20).isomorphic());
    CHECK(iso_rank1(all_once, all_once, 20).isomorphic());
    CHECK(iso_rank1(one_prime, zero, 50).isomorphic());
    auto v = iso_rank1(all_once, even_idx, 50);
    CHECK(v.non_isomorphic());
    CHECK(v.witness.find("25") != std::string::npos);
    CHECK(iso_rank1(all_once, even_idx, 4).value == TypeEquivalenceVerdict::Value::UnknownAtBound);
    // infinite-vs-finite certificate
    auto dyadic = DivisibilityType::from_entries({{2, kInfinity}});
    auto twos_once = DivisibilityType::from_entries({{2, 1}});
    auto w = iso_rank1(dyadic, twos_once, 10);
    CHECK(w.non_isomorphic());
    CHECK(w.witness.find("infinite") != std::string::npos);
}

TEST_CASE("e0_to_tfab1 matches decidable E0 on a small family") {
    std::vector<BitStream> fam = {
        BitStream::constant(0),
        BitStream::constant(0).with_flipped({3}),
        BitStream::characteristic_of_evens(),
        BitStream::characteristic_of_evens().with_flipped({0, 2}),
        BitStream::constant(1),
    };
    for (std::size_t i = 0; i < fam.size(); ++i)
        for (std::size_t j = i + 1; j < fam.size(); ++j) {
            auto ti = DivisibilityType::from_bits(fam[i]);
            auto tj = DivisibilityType::from_bits(fam[j]);
            auto verdict = iso_rank1(ti, tj, 50);
            if (e0_equivalent(fam[i], fam[j])) CHECK(verdict.isomorphic());
            else CHECK(verdict.non_isomorphic());
        }
    // the emitted diagrams realize the types
    auto s = e0_to_tfab1(fam[1]);
    u64 big = 1500;
    CHECK(s->code_of(Rational(1, 7), big).has_value());  // p_3 = 7 flipped on
    CHECK(!s->code_of(Rational(1, 2), big).has_value());
}

TEST_CASE("cof_to_tfab1 against the all-primes-once target") {
    auto target = DivisibilityType::uniform(1);
    auto full = DivisibilityType::from_enumeration(Enumeration::all());
    CHECK(iso_rank1(full, target, 40).isomorphic());
    auto cofinite = DivisibilityType::from_enumeration(Enumeration::decidable([](u64 k) { return k >= 2; }));
    CHECK(iso_rank1(cofinite, target, 40).isomorphic());
    auto evens = DivisibilityType::from_enumeration(Enumeration::decidable([](u64 k) { return k % 2 == 0; }));
    CHECK(iso_rank1(evens, target, 40).non_isomorphic());

    auto s = cof_to_tfab1(Enumeration::all());
    u64 big = 1500;
    CHECK(s->code_of(Rational(1, 5), big).has_value());
    CHECK(!s->code_of(Rational(1, 25), big).has_value());
}

TEST_CASE("group products and independence") {
    auto z2 = group_product({DivisibilityType(), DivisibilityType()});
    CHECK(audit_stream(*z2, 150, 8).clean());
    u64 big = 800;
    auto e1 = z2->code_of(QrVector{{Rational(1), Rational(0)}}, big);
    auto e2 = z2->code_of(QrVector{{Rational(0), Rational(1)}}, big);
    REQUIRE(e1.has_value());
    REQUIRE(e2.has_value());
    auto ind = independence_check(*z2, {*e1, *e2}, big, 3);
    CHECK(!ind.dependent);
    // (x, x) is dependent: x1 - x2 = 0
    auto dup = independence_check(*z2, {*e1, *e1}, big, 2);
    CHECK(dup.dependent);

    // codes of 1 and 2 in Z are dependent via 2*x1 - x2 = 0
    auto z = rank1_from_type(DivisibilityType());
    auto c1 = z->code_of(Rational(1), big);
    auto c2 = z->code_of(Rational(2), big);
    REQUIRE(c1.has_value());
    REQUIRE(c2.has_value());
    auto dep = independence_check(*z, {*c1, *c2}, big, 3);
    CHECK(dep.dependent);
    // the committed witness satisfies 2*m1 + 1*m2 = 0 (as integers)
    REQUIRE(dep.witness.size() == 2);
    CHECK(dep.witness[0] * 1 + dep.witness[1] * 2 == 0);
}

TEST_CASE("add_Z lifts rank") {
    auto z = rank1_from_type(DivisibilityType());
    auto z2 = add_Z(z);
    CHECK(audit_stream(*z2, 150, 8).clean());
    u64 big = 500;
    // the stream is nontrivial and the two generators are independent
    auto vz2 = std::static_pointer_cast<ValueStream<CodeZPair>>(z2);
    auto vz = std::static_pointer_cast<ValueStream<Rational>>(z);
    auto c1 = vz->code_of(Rational(1), big);
    REQUIRE(c1.has_value());
    auto a = vz2->code_of(CodeZPair{*c1, 0}, big);
    auto b = vz2->code_of(CodeZPair{0, 1}, big);
    REQUIRE(a.has_value());
    REQUIRE(b.has_value());
    if (vz->value(0).is_zero()) {
        auto ind = independence_check(*z2, {*a, *b}, big, 2);
        CHECK(!ind.dependent);
    }
}

TEST_CASE("extract_type inverts rank1_from_type on committed prefixes") {
    auto t = DivisibilityType::from_entries({{2, 1}, {3, 2}});
    auto s = rank1_from_type(t);
    u64 big = 2500;
    auto c1 = s->code_of(Rational(1), big);
    REQUIRE(c1.has_value());
    auto profile = extract_type(*s, *c1, big, 3, 3);
    CHECK(profile[2] == 1);
    CHECK(profile[3] == 2);
    CHECK(profile[5] == 0);
}
