#pragma once

#include <functional>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "workbench/diagrams.hpp"
#include "workbench/rational.hpp"
#include "workbench/value_stream.hpp"

namespace wb {

// ---------------------------------------------------------------------------
// Bit streams and decidable E0
// ---------------------------------------------------------------------------

// Total {0,1} stream.  Eventually periodic streams carry their description,
// which makes E0 (equality up to finitely many positions) decidable on them.
class BitStream {
public:
    BitStream() : prefix_{}, period_{0} {}
    BitStream(std::vector<int> prefix, std::vector<int> period)
        : prefix_(std::move(prefix)), period_(std::move(period)) {
        if (period_.empty()) throw std::domain_error("empty period");
        for (int b : prefix_) check_bit(b);
        for (int b : period_) check_bit(b);
    }
    static BitStream constant(int b) { return BitStream({}, {b}); }
    static BitStream characteristic_of_evens() { return BitStream({}, {1, 0}); }

    int at(u64 n) const {
        if (n < prefix_.size()) return prefix_[n];
        return period_[(n - prefix_.size()) % period_.size()];
    }
    const std::vector<int>& prefix() const { return prefix_; }
    const std::vector<int>& period() const { return period_; }

    // Flip finitely many positions (stays in the same E0 class).
    BitStream with_flipped(const std::vector<u64>& positions) const {
        u64 maxp = 0;
        for (u64 p : positions) maxp = std::max(maxp, p + 1);
        u64 len = std::max<u64>(prefix_.size(), maxp);
        std::vector<int> pre(len);
        for (u64 i = 0; i < len; ++i) pre[i] = at(i);
        std::vector<int> per(period_.size());
        for (std::size_t i = 0; i < period_.size(); ++i)
            per[i] = period_[(i + (len - prefix_.size()) % period_.size()) % period_.size()];
        BitStream out(std::move(pre), std::move(per));
        for (u64 p : positions) out.prefix_[p] ^= 1;
        return out;
    }

private:
    static void check_bit(int b) {
        if (b != 0 && b != 1) throw std::domain_error("bit must be 0 or 1");
    }
    std::vector<int> prefix_;
    std::vector<int> period_;
};

// Decidable E0 on eventually periodic streams: the tails are periodic, so the
// streams agree from some point on iff they agree on one full common period
// past both prefixes.
inline bool e0_equivalent(const BitStream& a, const BitStream& b) {
    u64 start = std::max(a.prefix().size(), b.prefix().size());
    u64 l = std::lcm<u64>(a.period().size(), b.period().size());
    for (u64 i = start; i < start + l; ++i)
        if (a.at(i) != b.at(i)) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Monotone enumerations (the W's of §-style reductions)
// ---------------------------------------------------------------------------

// A monotone enumeration of a subset of N: contains(k, s) is monotone in s.
// `decidable_limit`, when present, answers limit membership (used only by
// test oracles, never by the reductions themselves).
struct Enumeration {
    std::function<bool(u64 k, u64 stage)> contains;
    std::function<std::optional<bool>(u64 k)> decidable_limit = [](u64) { return std::nullopt; };

    static Enumeration all() {
        return {[](u64 k, u64 s) { return k <= s; }, [](u64) { return std::optional<bool>(true); }};
    }
    static Enumeration empty() {
        return {[](u64, u64) { return false; }, [](u64) { return std::optional<bool>(false); }};
    }
    static Enumeration decidable(std::function<bool(u64)> in) {
        return {[in](u64 k, u64 s) { return k <= s && in(k); },
                [in](u64 k) { return std::optional<bool>(in(k)); }};
    }
};

// ---------------------------------------------------------------------------
// Divisibility types
// ---------------------------------------------------------------------------

inline constexpr u64 kInfinity = UINT64_MAX;

// Type of a rank-1 group containing 1: prime -> entry in N u {infinity},
// revealed through monotone stagewise lower approximations.  Limit entries
// are exposed when the describing data is decidable.
class DivisibilityType {
public:
    DivisibilityType() : approx_([](u64, u64) { return u64(0); }), limit_([](u64) { return u64(0); }) {}

    static DivisibilityType from_entries(std::map<u64, u64> entries) {
        auto e = std::make_shared<std::map<u64, u64>>(std::move(entries));
        DivisibilityType t;
        t.approx_ = [e](u64 p, u64 s) {
            auto it = e->find(p);
            u64 v = it == e->end() ? 0 : it->second;
            return std::min<u64>(v, s);
        };
        t.limit_ = [e](u64 p) -> std::optional<u64> {
            auto it = e->find(p);
            return it == e->end() ? 0 : it->second;
        };
        return t;
    }

    // All entries equal to `v` (v may be kInfinity).
    static DivisibilityType uniform(u64 v) {
        DivisibilityType t;
        t.approx_ = [v](u64, u64 s) { return std::min<u64>(v, s); };
        t.limit_ = [v](u64) -> std::optional<u64> { return v; };
        return t;
    }

    // Entry f(n) at the n-th prime; revealed once n < stage.
    static DivisibilityType from_bits(const BitStream& f) {
        DivisibilityType t;
        t.approx_ = [f](u64 p, u64 s) -> u64 {
            u64 n = prime_index(p);
            return n < s ? static_cast<u64>(f.at(n)) : 0;
        };
        t.limit_ = [f](u64 p) -> std::optional<u64> { return static_cast<u64>(f.at(prime_index(p))); };
        return t;
    }

    // Entry 1 at the k-th prime iff k enters W; 0 otherwise.
    static DivisibilityType from_enumeration(const Enumeration& w) {
        DivisibilityType t;
        t.approx_ = [w](u64 p, u64 s) -> u64 { return w.contains(prime_index(p), s) ? 1 : 0; };
        t.limit_ = [w](u64 p) -> std::optional<u64> {
            auto v = w.decidable_limit(prime_index(p));
            if (!v) return std::nullopt;
            return *v ? 1 : 0;
        };
        return t;
    }

    u64 approx(u64 p, u64 stage) const { return approx_(p, stage); }
    std::optional<u64> limit(u64 p) const { return limit_(p); }

private:
    std::function<u64(u64, u64)> approx_;
    std::function<std::optional<u64>(u64)> limit_;
};

// CLI-facing type literal: "2:inf,3:1,5:0".
inline DivisibilityType parse_type_literal(const std::string& s) {
    std::map<u64, u64> entries;
    std::istringstream is(s);
    std::string item;
    while (std::getline(is, item, ',')) {
        if (item.empty()) continue;
        auto colon = item.find(':');
        if (colon == std::string::npos) throw std::domain_error("bad type literal item: " + item);
        u64 p = std::stoull(item.substr(0, colon));
        if (!is_prime_u64(p)) throw std::domain_error("not a prime: " + item);
        std::string v = item.substr(colon + 1);
        entries[p] = (v == "inf") ? kInfinity : std::stoull(v);
    }
    return DivisibilityType::from_entries(std::move(entries));
}

inline std::string format_type_prefix(const DivisibilityType& t, u64 stage, u64 prime_count) {
    std::string out;
    for (u64 i = 0; i < prime_count; ++i) {
        u64 p = nth_prime(i);
        if (!out.empty()) out += ",";
        auto lim = t.limit(p);
        if (lim && *lim == kInfinity) out += std::to_string(p) + ":inf";
        else out += std::to_string(p) + ":" + std::to_string(t.approx(p, stage));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Rank-1 presentations
// ---------------------------------------------------------------------------

using Rank1Stream = ValueStream<Rational>;
using Rank1Ptr = std::shared_ptr<Rank1Stream>;

// Stagewise membership of q in the rank-1 group of type t.
inline Tri rank1_member(const DivisibilityType& t, const Rational& q, u64 stage) {
    if (q.is_integer()) return Tri::True;
    bool settled = true;
    for (auto [p, e] : factorize(q.den().get_ui())) {
        if (e <= t.approx(p, stage)) continue;
        auto lim = t.limit(p);
        if (lim && *lim != kInfinity && *lim < e) return Tri::False;
        settled = false;
    }
    return settled ? Tri::True : Tri::Unknown;
}

// The rank-1 group of type t containing 1, presented as a GROUP diagram whose
// universe enumerates the admitted rationals canonically.
inline Rank1Ptr rank1_from_type(DivisibilityType t) {
    ValueStreamHooks<Rational> h;
    h.sig = group_signature();
    h.candidate = [](u64 i, u64) -> std::optional<Rational> { return rational_from_index(i); };
    h.member = [t](const Rational& q, u64 s) { return rank1_member(t, q, s); };
    h.eval = group_eval<Rational>();
    return std::make_shared<Rank1Stream>(std::move(h));
}

// §-style reductions to rank-1 groups.
inline Rank1Ptr e0_to_tfab1(const BitStream& f) { return rank1_from_type(DivisibilityType::from_bits(f)); }
inline Rank1Ptr cof_to_tfab1(const Enumeration& w) {
    return rank1_from_type(DivisibilityType::from_enumeration(w));
}

// ---------------------------------------------------------------------------
// Rank-r products of rank-1 types (the subgroup-of-Q^r corpus form)
// ---------------------------------------------------------------------------

// Element of Q^r.
struct QrVector {
    std::vector<Rational> coords;

    QrVector zero_like() const { return QrVector{std::vector<Rational>(coords.size(), Rational(0))}; }
    bool is_zero() const {
        for (const auto& c : coords)
            if (!c.is_zero()) return false;
        return true;
    }
    friend QrVector operator+(const QrVector& a, const QrVector& b) {
        if (a.coords.size() != b.coords.size()) throw std::domain_error("rank mismatch");
        QrVector r = a;
        for (std::size_t i = 0; i < r.coords.size(); ++i) r.coords[i] += b.coords[i];
        return r;
    }
    QrVector operator-() const {
        QrVector r = *this;
        for (auto& c : r.coords) c = -c;
        return r;
    }
    bool operator==(const QrVector& o) const {
        if (coords.size() != o.coords.size()) return false;
        for (std::size_t i = 0; i < coords.size(); ++i)
            if (!(coords[i] == o.coords[i])) return false;
        return true;
    }
    std::string str() const {
        std::string s;
        for (const auto& c : coords) {
            if (!s.empty()) s += "|";
            s += c.str();
        }
        return s;
    }
};

using GroupStream = ValueStream<QrVector>;
using GroupPtr = std::shared_ptr<GroupStream>;

// Direct sum of rank-1 groups of the given types, presented as a GROUP
// diagram on Q^r.
inline GroupPtr group_product(std::vector<DivisibilityType> types) {
    std::size_t r = types.size();
    if (r == 0) throw std::domain_error("rank must be >= 1");
    ValueStreamHooks<QrVector> h;
    h.sig = group_signature();
    h.candidate = [r](u64 i, u64) -> std::optional<QrVector> {
        std::vector<u64> idx = tuple_decode(i, r);
        QrVector v;
        v.coords.reserve(r);
        for (u64 k : idx) v.coords.push_back(rational_from_index(k));
        return v;
    };
    h.member = [types](const QrVector& v, u64 s) {
        Tri acc = Tri::True;
        for (std::size_t i = 0; i < types.size(); ++i)
            acc = tri_and(acc, rank1_member(types[i], v.coords[i], s));
        return acc;
    };
    h.eval = [r](u64 sym, const std::vector<QrVector>& a, u64) -> std::optional<QrVector> {
        switch (sym) {
            case 0: return QrVector{std::vector<Rational>(r, Rational(0))};
            case 1: return a[0] + a[1];
            case 2: return -a[0];
            default: return std::nullopt;
        }
    };
    return std::make_shared<GroupStream>(std::move(h));
}

// ---------------------------------------------------------------------------
// add_Z: G -> G x Z on free-standing diagrams
// ---------------------------------------------------------------------------

struct CodeZPair {
    u64 gcode;
    long z;
    std::string str() const { return std::to_string(gcode) + "," + std::to_string(z); }
};

// Direct sum with Z of an arbitrary GROUP diagram stream: elements are pairs
// (G-code, integer); the G-component is computed through committed facts.
inline StreamPtr add_Z(StreamPtr g) {
    if (!(g->sig() == group_signature())) throw std::domain_error("add_Z expects a GROUP stream");
    ValueStreamHooks<CodeZPair> h;
    h.sig = group_signature();
    h.candidate = [g](u64 i, u64 s) -> std::optional<CodeZPair> {
        auto [gi, zi] = cantor_unpair(i);
        if (!g->code_active(gi, s)) return std::nullopt;
        long z = (zi % 2 == 0) ? static_cast<long>(zi / 2) : -static_cast<long>((zi + 1) / 2);
        return CodeZPair{gi, z};
    };
    h.member = [g](const CodeZPair& v, u64 s) { return g->code_active(v.gcode, s) ? Tri::True : Tri::Unknown; };
    h.eval = [g](u64 sym, const std::vector<CodeZPair>& a, u64 s) -> std::optional<CodeZPair> {
        switch (sym) {
            case 0: {
                auto e = read_op(*g, s, 0, {});
                if (!e) return std::nullopt;
                return CodeZPair{*e, 0};
            }
            case 1: {
                auto r = read_op(*g, s, 1, {a[0].gcode, a[1].gcode});
                if (!r) return std::nullopt;
                return CodeZPair{*r, a[0].z + a[1].z};
            }
            case 2: {
                auto r = read_op(*g, s, 2, {a[0].gcode});
                if (!r) return std::nullopt;
                return CodeZPair{*r, -a[0].z};
            }
            default: return std::nullopt;
        }
    };
    return std::make_shared<ValueStream<CodeZPair>>(std::move(h));
}

// ---------------------------------------------------------------------------
// Bounded isomorphism verdicts for rank 1
// ---------------------------------------------------------------------------

struct TypeEquivalenceVerdict {
    enum class Value { Isomorphic, NonIsomorphic, UnknownAtBound };
    Value value;
    std::string witness;

    bool isomorphic() const { return value == Value::Isomorphic; }
    bool non_isomorphic() const { return value == Value::NonIsomorphic; }
    const char* name() const {
        switch (value) {
            case Value::Isomorphic: return "isomorphic";
            case Value::NonIsomorphic: return "non-isomorphic";
            default: return "unknown-at-bound";
        }
    }
};

// Bounded rank-1 isomorphism check.  Scans the first `bound` primes at stage
// `bound`.  Certificates: a prime with a decidably infinite entry on one side
// and a decidably finite one on the other, or at least `threshold` mismatched
// primes (default: half the scanned primes).  `isomorphic` requires the
// second half of the scanned window to be mismatch-free (the finitely many
// differences have stopped appearing); anything else is unknown-at-bound.
inline TypeEquivalenceVerdict iso_rank1(const DivisibilityType& a, const DivisibilityType& b, u64 bound,
                                        std::optional<u64> threshold_opt = std::nullopt) {
    std::vector<u64> mismatch_indices;
    for (u64 i = 0; i < bound; ++i) {
        u64 p = nth_prime(i);
        auto la = a.limit(p), lb = b.limit(p);
        if (la && lb) {
            bool ia = *la == kInfinity, ib = *lb == kInfinity;
            if (ia != ib) {
                return {TypeEquivalenceVerdict::Value::NonIsomorphic,
                        "prime " + std::to_string(p) + ": infinite vs finite entry"};
            }
            if (*la != *lb) mismatch_indices.push_back(i);
        } else {
            if (a.approx(p, bound) != b.approx(p, bound)) mismatch_indices.push_back(i);
        }
    }
    // Finitely many genuine differences eventually stop appearing in the tail
    // half of the scanned window, so the certificates look only there.
    u64 tail_size = bound - bound / 2;
    u64 threshold = threshold_opt ? *threshold_opt : std::max<u64>(4, tail_size / 2);
    u64 tail_mismatches = 0;
    for (u64 i : mismatch_indices)
        if (i >= bound / 2) ++tail_mismatches;
    std::string counts = std::to_string(mismatch_indices.size()) + " mismatched primes of " +
                         std::to_string(bound) + " scanned (" + std::to_string(tail_mismatches) + "/" +
                         std::to_string(tail_size) + " in the tail window)";
    if (tail_mismatches >= threshold)
        return {TypeEquivalenceVerdict::Value::NonIsomorphic, counts};
    if (tail_mismatches == 0)
        return {TypeEquivalenceVerdict::Value::Isomorphic, counts};
    return {TypeEquivalenceVerdict::Value::UnknownAtBound, counts};
}

// ---------------------------------------------------------------------------
// Type extraction from free-standing diagrams
// ---------------------------------------------------------------------------

// Greatest e <= cap with some committed x satisfying p^e x = g, read purely
// from committed facts (x ranges over active codes).
inline u64 extracted_divisibility(const DiagramStream& d, u64 g_code, u64 p, u64 stage, u64 cap) {
    u64 bound = d.code_bound(stage);
    u64 best = 0;
    for (u64 x = 0; x < bound; ++x) {
        // compute p^e * x by repeated committed addition while possible
        u64 acc = x;
        u64 pe = 1;
        bool alive = true;
        for (u64 e = 1; e <= cap && alive; ++e) {
            // multiply accumulated element by p: add it to itself p times
            u64 cur = acc;
            for (u64 j = 1; j < p && alive; ++j) {
                auto r = d.op_at(stage, 1, {cur, acc});
                if (!r) alive = false;
                else cur = *r;
            }
            if (!alive) break;
            acc = cur;
            pe *= p;
            if (acc == g_code && e > best) best = e;
        }
        (void)pe;
    }
    return best;
}

// Divisibility profile of the element g_code in a free-standing rank-1
// diagram: entry lower bounds at the first prime_count primes.
inline std::map<u64, u64> extract_type(const DiagramStream& d, u64 g_code, u64 stage, u64 prime_count,
                                       u64 cap = 8) {
    std::map<u64, u64> out;
    for (u64 i = 0; i < prime_count; ++i) {
        u64 p = nth_prime(i);
        out[p] = extracted_divisibility(d, g_code, p, stage, cap);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Independence checking on free-standing diagrams
// ---------------------------------------------------------------------------

struct IndependenceResult {
    bool dependent;
    std::vector<long> witness;  // integer relation, empty when independent-so-far
};

// Search for a committed integer relation m1 x1 + ... + mn xn = e with
// 0 < max|mi| <= coeff_bound.  Dependence requires every partial sum to be
// committed; independence is a bounded non-refutation.
inline IndependenceResult independence_check(const DiagramStream& d, const std::vector<u64>& tuple,
                                             u64 stage, u64 coeff_bound) {
    auto e_code = read_op(d, stage, 0, {});
    if (!e_code) return {false, {}};
    std::size_t n = tuple.size();
    std::vector<long> m(n, -static_cast<long>(coeff_bound));
    // scalar multiply by repeated committed addition; nullopt if any step unknown
    auto scaled = [&](u64 code, long k) -> std::optional<u64> {
        if (k == 0) return *e_code;
        u64 base = code;
        if (k < 0) {
            auto neg = read_op(d, stage, 2, {code});
            if (!neg) return std::nullopt;
            base = *neg;
            k = -k;
        }
        u64 acc = base;
        for (long i = 1; i < k; ++i) {
            auto r = read_op(d, stage, 1, {acc, base});
            if (!r) return std::nullopt;
            acc = *r;
        }
        return acc;
    };
    while (true) {
        bool all_zero = true;
        for (long mi : m) all_zero = all_zero && mi == 0;
        if (!all_zero) {
            std::optional<u64> sum = *e_code;
            for (std::size_t i = 0; i < n && sum; ++i) {
                auto term = scaled(tuple[i], m[i]);
                if (!term) sum = std::nullopt;
                else sum = read_op(d, stage, 1, {*sum, *term});
            }
            if (sum && *sum == *e_code) return {true, m};
        }
        std::size_t i = 0;
        for (; i < n; ++i) {
            if (m[i] < static_cast<long>(coeff_bound)) {
                ++m[i];
                break;
            }
            m[i] = -static_cast<long>(coeff_bound);
        }
        if (i == n) break;
    }
    return {false, {}};
}

}  // namespace wb
