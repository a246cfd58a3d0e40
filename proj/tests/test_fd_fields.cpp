#include "doctest.h"
#include "workbench/fd_fields.hpp"

using namespace wb;

TEST_CASE("conductor schedules of the example tower") {
    auto f = example_field_F();
    f->code_bound(0);
    CHECK(f->current_context() == 1);
    f->code_bound(1);
    CHECK(f->current_context() == 3);
    f->code_bound(2);
    CHECK(f->current_context() == 15);
    // the stage-2 field is the compositum of Q(zeta_3) and Q(zeta_5)
    CHECK(cyclotomic(15).degree() == 8);
    f->code_bound(3);
    CHECK(f->current_context() == 105);
}

TEST_CASE("example tower elements at a throttled pace") {
    auto f = example_field_F(32, 64);
    u64 big = 90;
    CHECK(f->code_bound(big) > 0);
    CHECK(f->current_context() == 15);
    auto z3 = f->code_of(CycloElt::zeta(3), big);
    auto z5 = f->code_of(CycloElt::zeta(5), big);
    auto z15 = f->code_of(CycloElt::zeta(15), big);
    REQUIRE(z3.has_value());
    REQUIRE(z5.has_value());
    REQUIRE(z15.has_value());
    CHECK(!f->code_of(CycloElt::zeta(7), big).has_value());
    auto sq3 = read_op(*f, big, "*", {*z3, *z3});
    REQUIRE(sq3.has_value());
    CHECK(f->value(*sq3) == CycloElt::zeta(3) * CycloElt::zeta(3));
    auto sq15 = read_op(*f, big, "*", {*z15, *z15});
    REQUIRE(sq15.has_value());
    CHECK(f->value(*sq15) == CycloElt(15, Poly<Rational>::x_power(2, Rational(1))));
    CHECK(audit_stream(*example_field_F(32, 2), 80, 8).clean());
}

TEST_CASE("inf-driven towers track |W|") {
    auto empty = inf_reduction(Enumeration::empty());
    empty->code_bound(6);
    CHECK(empty->current_context() == 1);

    auto two = inf_reduction(Enumeration::decidable([](u64 k) { return k < 2; }), 16, 16);
    two->code_bound(200);
    CHECK(two->current_context() == 15);
    two->code_bound(400);
    CHECK(two->current_context() == 15);  // stabilized
    CHECK(two->code_of(CycloElt::zeta(5), 400).has_value());
    CHECK(!two->code_of(CycloElt::zeta(7), 400).has_value());
    // refutation of a copy of the full tower: the limit field omits zeta_7
    CHECK(!has_primitive_root(7, 15));

    auto all = inf_reduction(Enumeration::all(), 32, 2);
    auto f = example_field_F(32, 2);
    for (u64 s : {40, 70, 90}) {
        all->code_bound(s);
        f->code_bound(s);
        CHECK(all->current_context() == f->current_context());
    }
}

TEST_CASE("event-driven tower adjoins a root per fired event") {
    auto fam = ones_count_detectors();
    BitStream two_ones = BitStream::constant(0).with_flipped({1, 4});
    auto g = pi2_reduction(two_ones, fam, 12, 8, 4);
    g->code_bound(100);
    CHECK(g->current_context() == 15);
    g->code_bound(160);
    CHECK(g->current_context() == 15);

    auto quiet = pi2_reduction(BitStream::constant(0), fam, 12, 8, 1);
    quiet->code_bound(100);
    CHECK(quiet->current_context() == 3);

    auto loud = pi2_reduction(BitStream::constant(1), fam, 12, 8, 1);
    auto f = example_field_F(8, 1);
    loud->code_bound(30);
    f->code_bound(30);
    CHECK(loud->current_context() == f->current_context());

    // out-of-nesting-order firing is a contract violation
    auto bad = pi2_reduction(
        BitStream::constant(0),
        [](u64 n, const BitStream&, u64 stage) { return n == 0 || (n == 3 && stage >= 2); }, 12, 1, 1);
    CHECK_THROWS_AS(bad->code_bound(10), detector_order_error);
}

TEST_CASE("shipped detector families") {
    BitStream f = BitStream::constant(0).with_flipped({0, 1, 2, 5});
    auto runs = run_detectors();
    CHECK(runs(0, f, 0));
    CHECK(runs(3, f, 10));
    CHECK(!runs(4, f, 50));

    auto ones = ones_count_detectors();
    CHECK(ones(0, f, 0));
    CHECK(ones(3, f, 10));   // four ones > 3
    CHECK(!ones(4, f, 50));  // never five ones

    auto steps = step_counter_detectors(
        [](u64 n) -> std::optional<u64> { return n < 4 ? std::optional<u64>(n * 5) : std::nullopt; });
    CHECK(steps(0, f, 0));
    CHECK(steps(2, f, 10));
    CHECK(!steps(3, f, 10));
    CHECK(steps(3, f, 15));
    CHECK(!steps(7, f, 1000));
}

TEST_CASE("the fixed integer-polynomial enumeration") {
    // block 1, degree 1: constant coefficient cycles fastest
    CHECK(integer_poly(0) == std::vector<long>({-1, -1}));
    CHECK(integer_poly(5) == std::vector<long>({1, 1}));
    auto i_cyc = integer_poly_index({1, 1, 1}, 500);
    auto i_sq2 = integer_poly_index({-2, 0, 1}, 5000);
    auto i_sq4 = integer_poly_index({-4, 0, 1}, 200000);
    REQUIRE(i_cyc.has_value());
    REQUIRE(i_sq2.has_value());
    REQUIRE(i_sq4.has_value());
    // block membership: every listed polynomial has max(height, degree) equal
    // to its block, and blocks are nondecreasing
    u64 prev_block = 1;
    for (u64 n = 0; n < 2000; ++n) {
        const auto& c = integer_poly(n);
        long h = 0;
        for (long v : c) h = std::max(h, std::labs(v));
        u64 blk = std::max<u64>(static_cast<u64>(h), c.size() - 1);
        CHECK(blk >= prev_block);
        prev_block = blk;
    }
}

TEST_CASE("root sets over Q: x^2-4 confirmed, x^2-2 never") {
    auto q = rationals_field_stream(8);
    u64 n4 = *integer_poly_index({-4, 0, 1}, 200000);
    u64 n2 = *integer_poly_index({-2, 0, 1}, 5000);
    CHECK(!root_confirmed(*q, n4, 100, 40));
    CHECK(root_confirmed(*q, n4, 12000, 40));
    CHECK(!root_confirmed(*q, n2, 12000, 40));
}

TEST_CASE("root sets are presentation invariant") {
    auto make_z3 = [] {
        return cyclo_tower_stream([](u64 s) { return s >= 1 ? u64(3) : u64(1); }, 3, 16);
    };
    auto a = make_z3();
    StreamPtr b = permute_stream(make_z3(), FiniteSupportPermutation(std::map<u64, u64>{{1, 4}, {4, 1}}));
    u64 stage = 6000;
    u64 polys = 120, cap = 24;
    auto sa = root_set(*a, stage, polys, cap);
    auto sb = root_set(*b, stage, polys, cap);
    CHECK(sa == sb);
    CHECK(sa.count(*integer_poly_index({1, 1, 1}, 500)) == 1);  // zeta_3 is a root
    CHECK(sa.count(*integer_poly_index({-2, 0, 1}, 5000)) == 0);
}

TEST_CASE("pure transcendental extension Q(t)") {
    auto q = rationals_field_stream(8);
    auto qt = pure_transcendental(q, 16);
    CHECK(qt->sig() == field_signature());
    CHECK(audit_stream(*qt, 120, 6).clean());
    u64 big = 2400;
    auto t = qt->code_of(RatFunc<CycloElt>::variable(), big);
    REQUIRE(t.has_value());
    // (t^2+1)/(t^2+1) normalizes to 1
    auto one_coeff = CycloElt::rational(Rational(1));
    Poly<CycloElt> p({one_coeff, CycloElt(), one_coeff});
    auto quot = qt->code_of(RatFunc<CycloElt>(p, p), big);
    auto one = qt->code_of(RatFunc<CycloElt>::constant(one_coeff), big);
    REQUIRE(one.has_value());
    CHECK(quot == one);
    // t is transcendental: committed arithmetic never collapses it to a constant
    auto tt = read_op(*qt, big, "*", {*t, *t});
    if (tt) {
        CHECK(qt->value(*tt) == RatFunc<CycloElt>(Poly<CycloElt>({CycloElt(), CycloElt(), one_coeff})));
        CHECK(*tt != *one);
    }
    auto zero = read_op(*qt, big, "0", {});
    REQUIRE(zero.has_value());
    CHECK(*t != *zero);
}

TEST_CASE("radical element arithmetic and canonical levels") {
    CHECK(RadElt(3, RatFunc<Rational>(Poly<Rational>::x_power(3, Rational(1)))) == RadElt::t());
    CHECK(RadElt(15, RatFunc<Rational>(Poly<Rational>::x_power(5, Rational(1)))) == RadElt::t_root(3));
    auto prod = RadElt::t_root(3) * RadElt::t_root(5);
    CHECK(prod == RadElt(15, RatFunc<Rational>(Poly<Rational>::x_power(8, Rational(1)))));
    CHECK(prod.level() == 15);
    CHECK(RadElt::t_root(3).str() == "u [t = u^3]");
    CHECK(RadElt::t().str() == "t");
    // cube of the cube root is t again
    CHECK(RadElt::t_root(3) * RadElt::t_root(3) * RadElt::t_root(3) == RadElt::t());
    CHECK(RadElt::t_root(3).inv() * RadElt::t() == RadElt::t_root(3) * RadElt::t_root(3));
}

TEST_CASE("radical field diagrams") {
    CHECK_THROWS_AS(radical_field({2}), std::domain_error);
    CHECK_THROWS_AS(radical_field({9}), std::domain_error);

    auto qt = radical_field({});
    CHECK(audit_stream(*qt, 120, 6).clean());
    CHECK(qt->code_of(RadElt::t(), 300).has_value());
    CHECK(!qt->code_of(RadElt::t_root(3), 300).has_value());

    auto r3 = radical_field({3});
    CHECK(audit_stream(*r3, 150, 6).clean());
    u64 big = 800;
    auto t = r3->code_of(RadElt::t(), big);
    auto u = r3->code_of(RadElt::t_root(3), big);
    REQUIRE(t.has_value());
    REQUIRE(u.has_value());
    // committed witness that t has a cube root: u * u * u = t
    auto uu = read_op(*r3, big, "*", {*u, *u});
    REQUIRE(uu.has_value());
    CHECK(read_op(*r3, big, "*", {*uu, *u}) == *t);
    // no committed fifth root of t at this level
    for (u64 c = 0; c < 12; ++c) {
        std::optional<u64> acc = c;
        for (int i = 1; i < 5 && acc; ++i) acc = read_op(*r3, big, "*", {*acc, c});
        bool is_root = acc.has_value() && *acc == *t;
        CHECK(!is_root);
    }

    auto r15 = radical_field({3, 5});
    u64 deep = 2600;
    auto u3 = r15->code_of(RadElt::t_root(3), deep);
    auto u5 = r15->code_of(RadElt::t_root(5), deep);
    REQUIRE(u3.has_value());
    REQUIRE(u5.has_value());
    auto p = read_op(*r15, deep, "*", {*u3, *u5});
    if (p) CHECK(r15->value(*p) == RadElt(15, RatFunc<Rational>(Poly<Rational>::x_power(8, Rational(1)))));
}
