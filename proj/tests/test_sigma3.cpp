#include <set>

#include "doctest.h"
#include "workbench/sigma3.hpp"

using namespace wb;

TEST_CASE("triple coding and reduction primes") {
    CHECK(pair_index(0, 1) == 0);
    CHECK_THROWS_AS(pair_index(1, 1), std::domain_error);
    CHECK_THROWS_AS(pair_index(2, 1), std::domain_error);
    for (u64 a = 0; a < 30; ++a) {
        auto [m, n] = pair_of_index(a);
        CHECK(m < n);
        CHECK(pair_index(m, n) == a);
    }
    for (u64 i = 0; i < 50; ++i) {
        Triple t = triple_of_index(i);
        CHECK(t.m < t.n);
        CHECK(triple_index(t.m, t.n, t.k) == i);
    }
    CHECK(reduction_prime(0, 1, 0) == 2);
    CHECK(reduction_prime(0, 1, 1) == 5);
    CHECK(reduction_prime(0, 2, 0) == 7);
    Triple t = triple_of_prime(7);
    CHECK(t.m == 0);
    CHECK(t.n == 2);
    CHECK(t.k == 0);
    CHECK_THROWS_AS(triple_of_prime(6), std::domain_error);
    // the prime map is injective on distinct triples
    std::set<u64> primes;
    for (u64 i = 0; i < 40; ++i) primes.insert(nth_prime(i));
    CHECK(primes.size() == 40);
}

TEST_CASE("scheduler: constant relations") {
    // R always true: every expansionary check fires, so small k accumulate
    // chips steadily.
    ChipScheduler st(identical_family(2), rel_const_true());
    st.run_to(499);
    CHECK(st.chip_count(0, 1, 0, 500) == 5);
    CHECK(st.chip_count(0, 1, 1, 500) == 5);
    CHECK(st.chip_count(0, 1, 2, 500) == 4);
    CHECK(st.chip_count(0, 1, 3, 500) == 3);
    CHECK(st.chip_count(0, 1, 4, 500) == 2);
    st.run_to(1999);
    for (u64 k = 0; k <= 4; ++k)
        CHECK(st.chip_count(0, 1, k, 2000) > st.chip_count(0, 1, k, 500));

    // R always false: no expansionary chip; every value of a pair is awarded
    // exactly once (least-never-awarded), so the image covers omega.
    ChipScheduler sf(identical_family(2), rel_const_false());
    sf.run_to(1999);
    std::set<std::pair<u64, u64>> seen;
    for (const Chip& c : sf.log()) {
        CHECK(c.m < c.n);
        auto [a, s] = cantor_unpair(c.stage);
        auto [m, n] = pair_of_index(a);
        CHECK(m == c.m);
        CHECK(n == c.n);
        CHECK(seen.insert({a, c.value}).second);  // never twice per pair
    }
    for (u64 k = 0; k <= 10; ++k) CHECK(sf.chip_count(0, 1, k, 2000) == 1);
}

TEST_CASE("scheduler: hand-run on an eventual-agreement pair") {
    // Streams differing exactly at position 5: witnesses x >= 5 work, smaller
    // ones fail at y = 5.
    ChipScheduler s(e0_pair_family(5), rel_e0());
    s.run_to(499);
    u64 expected[9] = {2, 2, 2, 2, 2, 2, 1, 1, 1};
    for (u64 k = 0; k <= 8; ++k) CHECK(s.chip_count(0, 1, k, 500) == expected[k]);
    for (u64 x = 0; x < 5; ++x) CHECK(s.agreement_length(0, 1, x) == 5);
    CHECK(s.agreement_length(0, 1, 5) == 496);
    CHECK(s.agreement_length(0, 1, 6) == 0);  // never checked by stage 500

    // In the long run: k >= 5 keep receiving chips, k < 5 freeze.
    s.run_to(19999);
    CHECK(s.chip_count(0, 1, 2, 20000) == 2);
    CHECK(s.chip_count(0, 1, 5, 20000) == 10);
    CHECK(s.chip_count(0, 1, 7, 20000) == 8);
}

TEST_CASE("machine: initial state and first promotion") {
    TripleMachine fresh(0, 1, 0);  // p = 2, N = 1
    CHECK(fresh.prime() == 2);
    CHECK(fresh.key_exponent() == 1);
    CHECK(!fresh.promoted());
    CHECK(fresh.admits(1, 1));    // 1/p in G_n at stage 0
    CHECK(!fresh.admits(0, 1));   // not in G_m
    CHECK(!fresh.admits(2, 1));   // nor anywhere else
    CHECK(!fresh.admits(99, 1));
    for (u64 l = 0; l < 6; ++l) CHECK(fresh.admits(l, 0));  // 1 is everywhere

    auto ctx = make_family(e0_pair_family(5), rel_e0());
    ctx->scheduler().run_to(0);
    const Chip& c0 = ctx->scheduler().log()[0];
    REQUIRE(c0.m == 0);
    REQUIRE(c0.n == 1);
    REQUIRE(c0.value == 0);  // the very first chip is c_{0,1} = 0
    fresh.step(1, ctx->scheduler().log());
    CHECK(fresh.key_exponent() == 2);
    CHECK(fresh.promoted());
    CHECK(fresh.admits(0, 1));   // the floor power spreads everywhere
    CHECK(fresh.admits(1, 2));   // G_n one ahead
    CHECK(!fresh.admits(0, 2));
    CHECK(fresh.admits(5, 2));   // l > N joins the N-side after promotion
}

TEST_CASE("machine: sequencing errors and bad triples") {
    CHECK_THROWS_AS(TripleMachine(1, 1, 0), std::domain_error);
    CHECK_THROWS_AS(TripleMachine(2, 1, 0), std::domain_error);
    auto ctx = make_family(e0_pair_family(5), rel_e0());
    ctx->scheduler().run_to(5);
    TripleMachine m(0, 1, 0);
    CHECK_THROWS_AS(m.step(2, ctx->scheduler().log()), sequencing_error);
    std::vector<Chip> empty_log;
    CHECK_THROWS_AS(m.step(1, empty_log), sequencing_error);
    m.step(1, ctx->scheduler().log());
    CHECK_THROWS_AS(m.step(1, ctx->scheduler().log()), sequencing_error);
}

TEST_CASE("machine answers equal the naive per-stage transcription") {
    auto ctx = make_family(e0_two_class_family(), rel_e0());
    u64 maxp = 0;
    for (u64 m = 0; m < 4; ++m)
        for (u64 n = m + 1; n <= 4; ++n)
            for (u64 k = 0; k <= 4; ++k) maxp = std::max(maxp, reduction_prime(m, n, k));
    NaiveSets nv = naive_oracle(ctx->scheduler(), 2000, maxp + 1);
    u64 checked = 0;
    for (u64 m = 0; m < 4; ++m)
        for (u64 n = m + 1; n <= 4; ++n)
            for (u64 k = 0; k <= 4; ++k) {
                u64 p = reduction_prime(m, n, k);
                TripleMachine& mm = ctx->machine(m, n, k, 2000);
                for (u64 l = 0; l <= 6; ++l)
                    for (u64 e = 1; e <= mm.key_exponent() + 2; ++e) {
                        ++checked;
                        CHECK(mm.admits(l, e) == nv.contains(l, p, e));
                    }
            }
    CHECK(checked > 40000);
}

TEST_CASE("membership dispatch over rationals") {
    auto ctx = make_family(e0_two_class_family(), rel_e0());
    u64 S = 2000;
    for (u64 l = 0; l < 5; ++l) {
        CHECK(ctx->membership(l, Rational(1), S));
        CHECK(ctx->membership(l, Rational(-7), S));
        CHECK(ctx->membership(l, Rational(0), S));
    }
    // composite denominators are the conjunction of the per-prime answers
    bool in2 = ctx->admits(3, 2, 1, S);
    bool in7 = ctx->admits(3, 7, 1, S);
    CHECK(ctx->membership(3, Rational(1, 14), S) == (in2 && in7));
    CHECK(ctx->membership(3, Rational(-3, 14), S) == (in2 && in7));
    // deep powers: depth at prime 2 is exactly r-1 or r per the tag rule
    TripleMachine& m2 = ctx->machine(0, 1, 0, S);
    u64 d = m2.depth(0);
    CHECK(ctx->membership(0, Rational(1, 1L << std::min<u64>(d, 30)), S) == (d <= 30));
    CHECK(!ctx->admits(0, 2, d + 1, S));
}

TEST_CASE("one-ahead gap when no pair is equivalent") {
    // With R always false, each triple's prime freezes with G_n exactly one
    // power ahead of G_m, and key exponents stop moving.
    auto ctx = make_family(identical_family(3), rel_const_false());
    u64 frozen[3][3] = {{2, 8, 17}, {7, 19, 32}, {5, 16, 33}};
    u64 pi = 0;
    for (u64 m = 0; m < 3; ++m)
        for (u64 n = m + 1; n < 3; ++n, ++pi)
            for (u64 k = 0; k < 3; ++k) {
                TripleMachine probe(m, n, k);
                probe.run_to(1500, ctx->scheduler());
                u64 r1 = probe.key_exponent();
                probe.run_to(3000, ctx->scheduler());
                u64 r = probe.key_exponent();
                CHECK(r == r1);  // frozen
                CHECK(r == frozen[pi][k]);
                CHECK(probe.admits(m, r - 1));
                CHECK(!probe.admits(m, r));
                CHECK(probe.admits(n, r));
                CHECK(!probe.admits(n, r + 1));
            }
}

TEST_CASE("identical streams make every tracked prime deeply divisible") {
    auto ctx = make_family(identical_family(3), rel_e0());
    for (u64 m = 0; m < 3; ++m)
        for (u64 n = m + 1; n < 3; ++n)
            for (u64 k = 0; k < 3; ++k) {
                TripleMachine& mm = ctx->machine(m, n, k, 20000);
                CHECK(mm.key_exponent() >= 14);
                for (u64 l = 0; l < 5; ++l) CHECK(mm.depth(l) >= 13);
            }
}

TEST_CASE("reduction: group diagrams and verdicts at bound") {
    auto ctx = make_family(e0_two_class_family(), rel_e0());
    auto jn = sigma3_reduce(ctx, 4);
    REQUIRE(jn->size() == 4);
    u64 S = 2000;
    auto g0 = jn->project(0);
    CHECK(g0->sig() == group_signature());
    CHECK(g0->code_bound(S) == 88);
    auto vs = std::dynamic_pointer_cast<ValueStream<Rational>>(g0);
    REQUIRE(vs);
    auto zero = vs->code_of(Rational(0), S);
    auto one = vs->code_of(Rational(1), S);
    auto half = vs->code_of(Rational(1, 2), S);
    REQUIRE(zero.has_value());
    REQUIRE(one.has_value());
    REQUIRE(half.has_value());
    CHECK(read_op(*g0, S, 1, {*half, *half}) == *one);  // 1/2 + 1/2 = 1
    CHECK(audit_stream(*g0, 60, 8).clean());
    CHECK(audit_stream(*jn->project(3), 60, 8).clean());

    // Verdicts at bound: a pair is judged equivalent when some k < 6 is still
    // collecting chips in the second half of the run.  This recovers the
    // known partition {0,1} / {2,3}.
    ctx->scheduler().run_to(19999);
    auto growing = [&](u64 m, u64 n) {
        for (u64 k = 0; k < 6; ++k)
            if (ctx->scheduler().chip_count(m, n, k, 20000) >
                ctx->scheduler().chip_count(m, n, k, 10000))
                return true;
        return false;
    };
    CHECK(growing(0, 1));
    CHECK(growing(2, 3));
    CHECK(!growing(0, 2));
    CHECK(!growing(0, 3));
    CHECK(!growing(1, 2));
    CHECK(!growing(1, 3));

    // Frozen divisibility snapshots behind the verdicts.
    TripleMachine probe(0, 2, 2);
    probe.run_to(10000, ctx->scheduler());
    CHECK(probe.key_exponent() == 64);
    probe.run_to(20000, ctx->scheduler());
    CHECK(probe.key_exponent() == 64);
    TripleMachine live(0, 1, 0);
    live.run_to(10000, ctx->scheduler());
    u64 r1 = live.key_exponent();
    CHECK(r1 == 12);
    live.run_to(20000, ctx->scheduler());
    CHECK(live.key_exponent() == 14);
}

TEST_CASE("auditor: clean run and corruption sensitivity") {
    auto ctx = make_family(e0_demo_family(), rel_e0());
    std::vector<Triple> sample = {{0, 1, 0}, {0, 1, 3}, {0, 2, 1}, {1, 3, 2},
                                  {2, 3, 4}, {0, 4, 0}, {2, 6, 1}, {3, 5, 0}};
    auto rep = sigma3_audit(*ctx, 10000, sample, 8);
    CHECK(rep.clean());
    CHECK(rep.triples_checked == 8);
    CHECK(rep.stages_checked == 10000);

    ctx->machine(0, 1, 0, 10000).corrupt_tag(0);
    auto bad = sigma3_audit(*ctx, 10000, {{0, 1, 0}}, 8);
    CHECK(!bad.clean());

    auto ctx2 = make_family(e0_demo_family(), rel_e0());
    ctx2->machine(0, 2, 1, 5000).corrupt_tag(2);
    CHECK(!sigma3_audit(*ctx2, 5000, {{0, 2, 1}}, 8).clean());
    // untouched triples still audit clean
    CHECK(sigma3_audit(*ctx2, 5000, {{0, 1, 0}}, 8).clean());
}

TEST_CASE("determinism of scheduler and diagrams") {
    auto a = make_family(e0_demo_family(), rel_e0());
    auto b = make_family(e0_demo_family(), rel_e0());
    a->scheduler().run_to(2999);
    b->scheduler().run_to(2999);
    REQUIRE(a->scheduler().processed() == b->scheduler().processed());
    for (u64 t = 0; t < 3000; ++t) {
        const Chip& ca = a->scheduler().log()[t];
        const Chip& cb = b->scheduler().log()[t];
        CHECK(ca.m == cb.m);
        CHECK(ca.n == cb.n);
        CHECK(ca.value == cb.value);
    }
    auto ga = std::dynamic_pointer_cast<ValueStream<Rational>>(sigma3_group_stream(a, 2));
    auto gb = std::dynamic_pointer_cast<ValueStream<Rational>>(sigma3_group_stream(b, 2));
    u64 S = 1000;
    REQUIRE(ga->code_bound(S) == gb->code_bound(S));
    for (u64 c = 0; c < ga->code_bound(S); ++c) {
        CHECK(ga->value(c) == gb->value(c));
        CHECK(ga->admitted_at(c) == gb->admitted_at(c));
    }
}
