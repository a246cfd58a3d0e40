#include "doctest.h"
#include "workbench/diagrams.hpp"
#include "workbench/rational.hpp"
#include "workbench/value_stream.hpp"

#include <random>
#include <sstream>

using namespace wb;

namespace {

// The shipped presentation of Z as a GROUP diagram: integers enumerated by
// the canonical rational enumeration, one index per stage.
StreamPtr z_stream() {
    ValueStreamHooks<Rational> h;
    h.sig = group_signature();
    h.candidate = [](u64 i, u64) -> std::optional<Rational> {
        Rational q = rational_from_index(i);
        if (!q.is_integer()) return std::nullopt;
        return q;
    };
    h.eval = group_eval<Rational>();
    return std::make_shared<ValueStream<Rational>>(std::move(h));
}

}  // namespace

TEST_CASE("fact numbering: first fact and round trips") {
    const Signature& g = group_signature();
    CHECK(fact_index(g, Fact{g.symbol_id("e"), {}, 0}) == 0);
    // (+, [0,0], 0): body = <<0,0>,0> = 0, so index = 0*3 + 1 = 1
    CHECK(fact_index(g, Fact{g.symbol_id("+"), {0, 0}, 0}) == 1);
    CHECK(fact_index(g, Fact{g.symbol_id("neg"), {0}, 0}) == 2);

    for (u64 n = 0; n < 100000; ++n) {
        CHECK(fact_index(g, fact_decode(g, n)) == n);
    }
    const Signature& f = field_signature();
    std::mt19937_64 rng(41);
    for (int i = 0; i < 1000; ++i) {
        Fact fact;
        fact.sym = rng() % f.symbols.size();
        fact.args.resize(f.symbols[fact.sym].arity);
        for (auto& a : fact.args) a = rng() % 500;
        fact.res = rng() % 500;
        CHECK(fact_decode(f, fact_index(f, fact)) == fact);
    }
    CHECK_THROWS_AS(fact_index(g, Fact{99, {}, 0}), malformed_fact_error);
    CHECK_THROWS_AS(fact_index(g, Fact{g.symbol_id("+"), {1}, 0}), malformed_fact_error);
}

TEST_CASE("Z group stream: read_op semantics") {
    auto z = z_stream();
    // stage 0: nothing but possibly the first admitted element
    auto early = read_op(*z, 0, "+", {0, 0});
    CHECK((!early.has_value() || *early == 0));

    auto vz = std::static_pointer_cast<ValueStream<Rational>>(z);
    u64 big = 2000;
    auto c1 = vz->code_of(Rational(1), big);
    auto c2 = vz->code_of(Rational(2), big);
    auto c3 = vz->code_of(Rational(3), big);
    REQUIRE(c1.has_value());
    REQUIRE(c2.has_value());
    REQUIRE(c3.has_value());
    CHECK(read_op(*z, big, "+", {*c1, *c2}) == *c3);
    // e is the code of 0
    auto c0 = vz->code_of(Rational(0), big);
    REQUIRE(c0.has_value());
    CHECK(read_op(*z, big, "e", {}) == *c0);
    CHECK(*c0 == 0);  // 0 = rational_from_index(0) is admitted first
    // negation
    auto cm1 = vz->code_of(Rational(-1), big);
    REQUIRE(cm1.has_value());
    CHECK(read_op(*z, big, "neg", {*c1}) == *cm1);
    // monotonicity of committed results
    for (u64 s = 0; s <= 100; ++s) {
        auto r = read_op(*z, s, "+", {0, 0});
        if (r) {
            for (u64 s2 = s; s2 <= s + 20; ++s2) CHECK(read_op(*z, s2, "+", {0, 0}) == r);
            break;
        }
    }
}

TEST_CASE("fact_status three-valued semantics") {
    auto z = z_stream();
    const Signature& g = group_signature();
    // unknown at stage 0 for a query about inactive codes
    CHECK(fact_status(*z, 0, Fact{g.symbol_id("+"), {50, 60}, 2}) == Tri::Unknown);
    auto vz = std::static_pointer_cast<ValueStream<Rational>>(z);
    u64 big = 2000;
    u64 c1 = *vz->code_of(Rational(1), big);
    u64 c2 = *vz->code_of(Rational(2), big);
    u64 c3 = *vz->code_of(Rational(3), big);
    CHECK(fact_status(*z, big, Fact{g.symbol_id("+"), {c1, c2}, c3}) == Tri::True);
    CHECK(fact_status(*z, big, Fact{g.symbol_id("+"), {c1, c2}, c1}) == Tri::False);
}

TEST_CASE("stream audit passes on honest streams, flags corrupt ones") {
    auto z = z_stream();
    auto rep = audit_stream(*z, 200, 16);
    CHECK(rep.clean());
    CHECK(rep.queries > 0);

    // a scripted stream that changes a committed result
    const Signature& g = group_signature();
    ScriptedStream bad(g,
                       {{0, Fact{g.symbol_id("+"), {0, 0}, 0}}, {5, Fact{g.symbol_id("+"), {0, 0}, 1}}},
                       [](u64) { return 2; });
    auto bad_rep = audit_stream(bad, 10, 4);
    CHECK(!bad_rep.clean());
}

TEST_CASE("join and project") {
    auto a = z_stream();
    auto b = z_stream();
    auto j1 = join({a});
    CHECK(j1->project(0) == a);
    auto j2 = join({a, b});
    CHECK(j2->project(1) == b);
    CHECK_THROWS_AS(j2->project(5), std::out_of_range);
    // interleaving is the pairing: every (component, bit) has a unique slot
    std::mt19937_64 rng(43);
    for (int i = 0; i < 200; ++i) {
        u64 comp = rng() % 8, bit = rng() % 100000;
        auto [c, n] = JoinedStream::locate_bit(JoinedStream::global_bit(comp, bit));
        CHECK(c == comp);
        CHECK(n == bit);
    }
}

TEST_CASE("operator composition and pairing") {
    auto z = z_stream();
    auto ident = identity_operator();
    auto comp = compose(ident, ident);
    CHECK(comp(z) == z);
    auto pairing = pair_with_constant(z, ident);
    auto out = pairing(z);
    CHECK(out->size() == 2);
    CHECK(out->project(0) == z);
    CHECK(out->project(1) == z);
}

TEST_CASE("permuted streams are isomorphic copies") {
    auto z = z_stream();
    FiniteSupportPermutation p(std::map<u64, u64>{{0, 3}, {3, 5}, {5, 0}});
    auto pz = permute_stream(z, p);
    CHECK(pz->sig() == z->sig());
    u64 big = 500;
    for (u64 a = 0; a < 8; ++a)
        for (u64 b = 0; b < 8; ++b) {
            auto base = read_op(*z, big, "+", {a, b});
            auto perm = read_op(*pz, big, "+", {p(a), p(b)});
            if (base) CHECK(perm == p(*base));
        }
    CHECK(audit_stream(*pz, 100, 10).clean());
    CHECK_THROWS_AS(FiniteSupportPermutation(std::map<u64, u64>{{0, 1}, {2, 1}}), std::domain_error);
}

TEST_CASE("JSONL emission is deterministic and bit-exact") {
    auto write_once = [] {
        auto z = z_stream();
        std::ostringstream os;
        write_diagram_events(*z, 60, os, 12);
        return os.str();
    };
    std::string first = write_once();
    CHECK(first == write_once());
    CHECK(!first.empty());
    // each line round-trips through the fact numbering
    std::istringstream is(first);
    std::string line;
    u64 prev_stage = 0;
    int lines = 0;
    while (std::getline(is, line)) {
        auto j = nlohmann::json::parse(line);
        Fact f;
        f.sym = group_signature().symbol_id(j["fact"]["sym"].get<std::string>());
        f.args = j["fact"]["args"].get<std::vector<u64>>();
        f.res = j["fact"]["res"].get<u64>();
        CHECK(fact_index(group_signature(), f) == j["bit"].get<u64>());
        CHECK(j["stage"].get<u64>() >= prev_stage);
        prev_stage = j["stage"].get<u64>();
        ++lines;
    }
    CHECK(lines > 10);

    auto z = z_stream();
    std::ostringstream raw;
    write_raw_bits(*z, 40, 30, raw);
    std::string raw1 = raw.str();
    CHECK(!raw1.empty());
    std::istringstream ris(raw1);
    while (std::getline(ris, line)) {
        auto j = nlohmann::json::parse(line);
        Fact f = fact_decode(group_signature(), j["bit"].get<u64>());
        Tri expect = j["val"].get<int>() == 1 ? Tri::True : Tri::False;
        CHECK(fact_status(*z, 40, f) == expect);
        CHECK(fact_status(*z, j["stage"].get<u64>(), f) == expect);
        if (j["stage"].get<u64>() > 0)
            CHECK(fact_status(*z, j["stage"].get<u64>() - 1, f) == Tri::Unknown);
    }
}
