#include "doctest.h"
#include "workbench/util.hpp"

#include <random>

using namespace wb;

TEST_CASE("cantor pairing round-trips") {
    CHECK(cantor_pair(0, 0) == 0);
    CHECK(cantor_pair(1, 0) == 1);
    CHECK(cantor_pair(0, 1) == 2);
    CHECK(cantor_pair(2, 0) == 3);
    CHECK(cantor_pair(1, 1) == 4);
    CHECK(cantor_pair(0, 2) == 5);
    std::mt19937_64 rng(7);
    for (int i = 0; i < 2000; ++i) {
        u64 a = rng() % 1000000, b = rng() % 1000000;
        auto [x, y] = cantor_unpair(cantor_pair(a, b));
        CHECK(x == a);
        CHECK(y == b);
    }
    for (u64 z = 0; z < 5000; ++z) {
        auto [a, b] = cantor_unpair(z);
        CHECK(cantor_pair(a, b) == z);
    }
}

TEST_CASE("cantor pairing large values") {
    u64 big = u64(1) << 31;
    auto [a, b] = cantor_unpair(cantor_pair(big, big + 17));
    CHECK(a == big);
    CHECK(b == big + 17);
    CHECK_THROWS_AS(cantor_pair(u64(1) << 63, u64(1) << 63), overflow_error);
}

TEST_CASE("tuple encoding round-trips") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 500; ++i) {
        std::size_t len = 1 + rng() % 4;
        std::vector<u64> t(len);
        for (auto& v : t) v = rng() % (len > 2 ? 50 : 1000);
        CHECK(tuple_decode(tuple_encode(t), len) == t);
    }
    CHECK(tuple_encode({5}) == 5);
    CHECK(tuple_encode({1, 2}) == cantor_pair(1, 2));
}

TEST_CASE("primes") {
    CHECK(nth_prime(0) == 2);
    CHECK(nth_prime(1) == 3);
    CHECK(nth_prime(4) == 11);
    CHECK(prime_index(2) == 0);
    CHECK(prime_index(11) == 4);
    for (u64 n = 0; n < 100; ++n) CHECK(prime_index(nth_prime(n)) == n);
    auto f = factorize(360);
    REQUIRE(f.size() == 3);
    CHECK(f[0] == std::pair<u64, u64>{2, 3});
    CHECK(f[1] == std::pair<u64, u64>{3, 2});
    CHECK(f[2] == std::pair<u64, u64>{5, 1});
}

TEST_CASE("tri lattice") {
    CHECK(tri_and(Tri::True, Tri::Unknown) == Tri::Unknown);
    CHECK(tri_and(Tri::False, Tri::Unknown) == Tri::False);
    CHECK(tri_or(Tri::True, Tri::Unknown) == Tri::True);
    CHECK(tri_or(Tri::False, Tri::Unknown) == Tri::Unknown);
}
