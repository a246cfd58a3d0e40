#pragma once

#include <functional>
#include <memory>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "workbench/cyclo.hpp"
#include "workbench/ratfunc.hpp"
#include "workbench/tfab.hpp"
#include "workbench/value_stream.hpp"

namespace wb {

// ---------------------------------------------------------------------------
// Conductor schedules
// ---------------------------------------------------------------------------

inline u64 odd_prime(u64 i) { return nth_prime(i + 1); }

inline u64 odd_prime_product(u64 k) {
    u64 r = 1;
    for (u64 i = 0; i < k; ++i) {
        u64 p = odd_prime(i);
        if (r > UINT64_MAX / p) throw overflow_error("conductor overflow");
        r *= p;
    }
    return r;
}

// ---------------------------------------------------------------------------
// Cyclotomic tower presentations
// ---------------------------------------------------------------------------

// Canonical enumeration of the limit tower: index -> <m, poly> where m picks
// the conductor (product of the first m odd primes) and the poly is a rational
// coefficient vector evaluated at zeta.
inline std::optional<CycloElt> decode_cyclo_value(u64 index) {
    auto [m, j] = cantor_unpair(index);
    if (m > 8) return std::nullopt;  // beyond any computable stage budget
    u64 n = odd_prime_product(m);
    auto [len, body] = cantor_unpair(j);
    // unreduced encodings are redundant: every element has a representation
    // of degree below phi(n), so higher-degree vectors are skipped
    if (n > 1 && len + 1 > euler_phi_squarefree(n)) return std::nullopt;
    if (n == 1 && len > 0) return std::nullopt;
    std::vector<u64> entries = tuple_decode(body, len + 1);
    std::vector<Rational> coeffs;
    coeffs.reserve(entries.size());
    for (u64 e : entries) coeffs.push_back(rational_from_index(e));
    return CycloElt(n, Poly<Rational>(std::move(coeffs)));
}

using CycloStreamPtr = std::shared_ptr<ValueStream<CycloElt>>;

// Keys must carry the conductor: the printed polynomial alone is ambiguous
// across conductors (zeta_7 and zeta_15 both print as "z").  Values liftable
// into the context are canonicalized there first, so committed elements and
// equal probe values always agree.
inline std::string cyclo_key(const CycloElt& v, u64 ctx) {
    CycloElt c = (ctx % v.conductor() == 0) ? v.embedded(ctx) : v;
    return std::to_string(c.conductor()) + "|" + c.str();
}

// Field diagram of a growing cyclotomic tower.  conductor(s) must be monotone
// under divisibility.  When `conductor_limit` is known, candidates outside the
// limit field are dropped instead of queued forever.
inline CycloStreamPtr cyclo_tower_stream(std::function<u64(u64)> conductor,
                                         std::optional<u64> conductor_limit = std::nullopt,
                                         u64 indices_per_stage = 1) {
    ValueStreamHooks<CycloElt> h;
    h.sig = field_signature();
    h.candidate = [](u64 i, u64) { return decode_cyclo_value(i); };
    h.member = [conductor, conductor_limit](const CycloElt& v, u64 s) {
        if (conductor(s) % v.conductor() == 0) return Tri::True;
        if (conductor_limit && *conductor_limit % v.conductor() != 0) return Tri::False;
        return Tri::Unknown;
    };
    h.eval = field_eval<CycloElt>();
    h.context = std::move(conductor);
    h.key = [](const CycloElt& v, u64 ctx) { return cyclo_key(v, ctx); };
    h.lift = [](const CycloElt& v, u64 ctx) {
        if (ctx % v.conductor() != 0) return v;
        return v.embedded(ctx);
    };
    h.indices_per_stage = indices_per_stage;
    return std::make_shared<ValueStream<CycloElt>>(std::move(h));
}

// Presentation of Q itself (conductor pinned at 1).
inline CycloStreamPtr rationals_field_stream(u64 indices_per_stage = 8) {
    return cyclo_tower_stream([](u64) { return u64(1); }, 1, indices_per_stage);
}

// Degree of Q(zeta_n) over Q grows like phi(n), so conductor growth must be
// throttled for deep runs: with `pace` stages per new prime the limit field is
// unchanged while element-level work stays feasible.  pace = 1 is the literal
// one-prime-per-stage schedule, usable only for the first few stages.
inline u64 paced_conductor(u64 wanted, u64 stage, u64 pace) {
    return odd_prime_product(std::min<u64>({wanted, stage / pace, 12}));
}

// The example tower: the conductor climbs through the products of the first k
// odd primes, so the limit contains a primitive q-th root of unity for every
// odd prime q.  At pace 1, stage s has the product of the first s odd primes.
inline CycloStreamPtr example_field_F(u64 pace = 1, u64 indices_per_stage = 1) {
    return cyclo_tower_stream([pace](u64 s) { return paced_conductor(UINT64_MAX, s, pace); },
                              std::nullopt, indices_per_stage);
}

// Tower driven by a monotone enumeration: the conductor is the product of the
// first k odd primes where k = |W| as seen so far.  Output is a copy of the
// example tower iff W is infinite.
inline CycloStreamPtr inf_reduction(Enumeration w, u64 pace = 1, u64 indices_per_stage = 1) {
    auto conductor = [w = std::move(w), pace](u64 s) {
        u64 count = 0;
        for (u64 k = 0; k < s; ++k)
            if (w.contains(k, s)) ++count;
        return paced_conductor(count, s, pace);
    };
    return cyclo_tower_stream(std::move(conductor), std::nullopt, indices_per_stage);
}

// ---------------------------------------------------------------------------
// Event-driven tower (nested one-shot detectors)
// ---------------------------------------------------------------------------

struct detector_order_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// fired(n, f, stage): has the n-th event been observed on the prefix of f up
// to the stage?  Must be monotone in stage; events must fire in nesting order
// (event n+1 only after event n); event 0 fires immediately.
using DetectorFamily = std::function<bool(u64 n, const BitStream& f, u64 stage)>;

// The n-th root of unity is adjoined when the n-th nested event fires: the
// output conductor at a stage is the product of the first k odd primes, where
// k is the length of the fired initial segment.
inline CycloStreamPtr pi2_reduction(BitStream f, DetectorFamily fired, u64 detector_cap = 12,
                                    u64 pace = 1, u64 indices_per_stage = 1) {
    auto conductor = [f = std::move(f), fired = std::move(fired), detector_cap, pace](u64 s) {
        u64 checked = std::min<u64>(s, detector_cap);
        u64 k = 0;
        while (k < checked && fired(k, f, s)) ++k;
        for (u64 n = k + 1; n < checked; ++n)
            if (fired(n, f, s)) throw detector_order_error("event fired out of nesting order");
        return paced_conductor(k, s, pace);
    };
    return cyclo_tower_stream(std::move(conductor), std::nullopt, indices_per_stage);
}

// Shipped detector families ------------------------------------------------

// Event 0 immediate; event n observed once f shows more than n ones.
inline DetectorFamily ones_count_detectors() {
    return [](u64 n, const BitStream& f, u64 stage) {
        if (n == 0) return true;
        u64 ones = 0;
        for (u64 i = 0; i < stage; ++i) ones += static_cast<u64>(f.at(i));
        return ones >= n + 1;
    };
}

// Event n observed once f shows a run of n consecutive ones.
inline DetectorFamily run_detectors() {
    return [](u64 n, const BitStream& f, u64 stage) {
        if (n == 0) return true;
        u64 run = 0;
        for (u64 i = 0; i < stage; ++i) {
            run = f.at(i) ? run + 1 : 0;
            if (run >= n) return true;
        }
        return false;
    };
}

// Event n fires at the given step count (never, when absent).  steps must be
// nondecreasing where defined, with steps(0) = 0.
inline DetectorFamily step_counter_detectors(std::function<std::optional<u64>(u64)> steps) {
    return [steps = std::move(steps)](u64 n, const BitStream&, u64 stage) {
        auto t = steps(n);
        return t.has_value() && stage >= *t;
    };
}

// ---------------------------------------------------------------------------
// Root-set operator
// ---------------------------------------------------------------------------

// Fixed enumeration of nonconstant integer polynomials, ordered by blocks of
// increasing B = max(height, degree) and lexicographically (low coefficient
// fastest) inside a block.  Returned as coefficient vectors c_0..c_deg.
inline const std::vector<long>& integer_poly(u64 n) {
    static std::vector<std::vector<long>> cache;
    static u64 next_block = 1;
    while (cache.size() <= n) {
        long b = static_cast<long>(next_block);
        for (u64 deg = 1; deg <= next_block; ++deg) {
            std::vector<long> c(deg + 1, -b);
            while (true) {
                bool in_block = (deg == next_block);
                for (long v : c)
                    if (v == b || v == -b) in_block = true;
                if (c[deg] != 0 && in_block) cache.push_back(c);
                std::size_t i = 0;
                while (i <= deg && c[i] == b) c[i] = -b, ++i;
                if (i > deg) break;
                ++c[i];
            }
        }
        ++next_block;
    }
    return cache[n];
}

// Index of a coefficient vector in the fixed enumeration (scans up to bound).
inline std::optional<u64> integer_poly_index(const std::vector<long>& coeffs, u64 bound = 200000) {
    for (u64 n = 0; n < bound; ++n)
        if (integer_poly(n) == coeffs) return n;
    return std::nullopt;
}

// Committed code of the natural number v in a field diagram, built from the
// committed 0, 1 and + facts only.
inline std::optional<u64> field_nat_code(const DiagramStream& f, u64 stage, u64 v) {
    auto acc = read_op(f, stage, 0, {});
    if (v == 0 || !acc) return acc;
    auto one = read_op(f, stage, 1, {});
    if (!one) return std::nullopt;
    acc = one;
    for (u64 i = 1; i < v && acc; ++i) acc = read_op(f, stage, 2, {*acc, *one});
    return acc;
}

// Has some committed element been certified as a root of the n-th polynomial?
// The polynomial is split as p = plus - minus with nonnegative coefficients
// and both sides are evaluated by Horner over committed facts, so only
// natural-number constants are needed.
inline bool root_confirmed(const DiagramStream& f, u64 n, u64 stage, u64 code_cap) {
    const std::vector<long>& c = integer_poly(n);
    auto horner = [&](u64 e, bool positive) -> std::optional<u64> {
        std::optional<u64> acc = field_nat_code(f, stage, 0);
        for (std::size_t i = c.size(); i-- > 0 && acc;) {
            if (i + 1 < c.size()) acc = read_op(f, stage, 4, {*acc, e});
            if (!acc) break;
            long coeff = positive ? std::max(c[i], 0L) : std::max(-c[i], 0L);
            auto k = field_nat_code(f, stage, static_cast<u64>(coeff));
            if (!k) return std::nullopt;
            acc = read_op(f, stage, 2, {*acc, *k});
        }
        return acc;
    };
    u64 bound = std::min<u64>(f.code_bound(stage), code_cap);
    for (u64 e = 0; e < bound; ++e) {
        auto plus = horner(e, true);
        if (!plus) continue;
        auto minus = horner(e, false);
        if (minus && *plus == *minus) return true;
    }
    return false;
}

// The stagewise-confirmed root set over the first `poly_count` polynomials.
// Monotone in stage: confirmations only rely on committed facts.
inline std::set<u64> root_set(const DiagramStream& f, u64 stage, u64 poly_count, u64 code_cap) {
    std::set<u64> out;
    for (u64 n = 0; n < poly_count; ++n)
        if (root_confirmed(f, n, stage, code_cap)) out.insert(n);
    return out;
}

// ---------------------------------------------------------------------------
// Pure transcendental extension A(t)
// ---------------------------------------------------------------------------

inline std::optional<Poly<CycloElt>> decode_cyclo_poly(u64 index) {
    auto [len, body] = cantor_unpair(index);
    std::vector<u64> entries = tuple_decode(body, len + 1);
    std::vector<CycloElt> coeffs;
    coeffs.reserve(entries.size());
    for (u64 e : entries) {
        auto c = decode_cyclo_value(e);
        if (!c) return std::nullopt;
        coeffs.push_back(std::move(*c));
    }
    return Poly<CycloElt>(std::move(coeffs));
}

inline RatFunc<CycloElt> lift_cyclo_ratfunc(const RatFunc<CycloElt>& q, u64 ctx) {
    auto lift_poly = [ctx](const Poly<CycloElt>& p) -> std::optional<Poly<CycloElt>> {
        std::vector<CycloElt> c;
        c.reserve(p.coeffs().size());
        for (const auto& k : p.coeffs()) {
            if (ctx % k.conductor() != 0) return std::nullopt;
            c.push_back(k.embedded(ctx));
        }
        return Poly<CycloElt>(std::move(c));
    };
    auto n = lift_poly(q.num());
    if (!n) return q;
    auto d = lift_poly(q.den());
    if (!d) return q;
    return RatFunc<CycloElt>(std::move(*n), std::move(*d));
}

// A(t) for a tower presentation A: elements are rational functions in t whose
// canonical-form coefficients are committed elements of A; equality is the
// coefficientwise normal-form identity.
inline std::shared_ptr<ValueStream<RatFunc<CycloElt>>> pure_transcendental(CycloStreamPtr a,
                                                                           u64 indices_per_stage = 16) {
    ValueStreamHooks<RatFunc<CycloElt>> h;
    h.sig = field_signature();
    h.candidate = [](u64 i, u64) -> std::optional<RatFunc<CycloElt>> {
        auto [ni, di] = cantor_unpair(i);
        auto num = decode_cyclo_poly(ni);
        if (!num) return std::nullopt;
        auto den = decode_cyclo_poly(di);
        if (!den || den->is_zero()) return std::nullopt;
        return RatFunc<CycloElt>(std::move(*num), std::move(*den));
    };
    h.member = [a](const RatFunc<CycloElt>& q, u64 s) {
        for (const Poly<CycloElt>* p : {&q.num(), &q.den()})
            for (const auto& c : p->coeffs())
                if (!a->code_of(c, s)) return Tri::Unknown;
        return Tri::True;
    };
    h.eval = field_eval<RatFunc<CycloElt>>();
    h.context = [a](u64 s) {
        a->code_bound(s);
        return a->current_context();
    };
    h.key = [](const RatFunc<CycloElt>& q, u64 ctx) {
        RatFunc<CycloElt> l = lift_cyclo_ratfunc(q, ctx);
        std::string s = "N";
        for (const auto& c : l.num().coeffs()) s += cyclo_key(c, ctx) + ";";
        s += "D";
        for (const auto& c : l.den().coeffs()) s += cyclo_key(c, ctx) + ";";
        return s;
    };
    h.lift = [](const RatFunc<CycloElt>& q, u64 ctx) { return lift_cyclo_ratfunc(q, ctx); };
    h.indices_per_stage = indices_per_stage;
    return std::make_shared<ValueStream<RatFunc<CycloElt>>>(std::move(h));
}

// ---------------------------------------------------------------------------
// Radical function field Q(t^{1/n})
// ---------------------------------------------------------------------------

// Element of the level tower: a rational function in u, where u = t^{1/level}.
// Stored in canonical minimal-level form: the level is divided by the gcd of
// the level and all exponents in the support, so equal elements at different
// levels coincide.
class RadElt {
public:
    RadElt() : level_(1) {}
    RadElt(u64 level, RatFunc<Rational> f) : level_(level), f_(std::move(f)) { canonicalize(); }
    static RadElt t() { return RadElt(1, RatFunc<Rational>::variable()); }
    static RadElt t_root(u64 n) { return RadElt(n, RatFunc<Rational>::variable()); }

    u64 level() const { return level_; }
    const RatFunc<Rational>& func() const { return f_; }

    RadElt zero_like() const { return RadElt(); }
    RadElt one_like() const { return RadElt(1, RatFunc<Rational>::constant(Rational(1))); }

    // The function in u_m, for a multiple m of the level (u_old = u_m^{m/level}).
    RatFunc<Rational> at_level(u64 m) const {
        if (m % level_ != 0) throw std::domain_error("not a level multiple");
        u64 k = m / level_;
        auto stretch = [k](const Poly<Rational>& p) {
            return p.compose(Poly<Rational>::x_power(k, Rational(1)));
        };
        return RatFunc<Rational>(stretch(f_.num()), stretch(f_.den()));
    }

    friend RadElt operator+(const RadElt& a, const RadElt& b) {
        u64 m = std::lcm(a.level_, b.level_);
        return RadElt(m, a.at_level(m) + b.at_level(m));
    }
    friend RadElt operator-(const RadElt& a, const RadElt& b) { return a + (-b); }
    RadElt operator-() const { return RadElt(level_, -f_); }
    friend RadElt operator*(const RadElt& a, const RadElt& b) {
        u64 m = std::lcm(a.level_, b.level_);
        return RadElt(m, a.at_level(m) * b.at_level(m));
    }
    RadElt inv() const { return RadElt(level_, f_.inv()); }
    friend bool operator==(const RadElt& a, const RadElt& b) {
        return a.level_ == b.level_ && a.f_ == b.f_;
    }

    std::string str() const {
        if (level_ == 1) return f_.str("t");
        return f_.str("u") + " [t = u^" + std::to_string(level_) + "]";
    }

private:
    void canonicalize() {
        u64 g = level_;
        for (const Poly<Rational>* p : {&f_.num(), &f_.den()})
            for (std::size_t i = 0; i < p->coeffs().size() && g > 1; ++i)
                if (!p->coeffs()[i].is_zero()) g = std::gcd(g, static_cast<u64>(i));
        if (f_.is_zero() || g == 0) {
            level_ = 1;
            if (f_.is_zero()) f_ = RatFunc<Rational>();
            return;
        }
        if (g == 1) return;
        auto shrink = [g](const Poly<Rational>& p) {
            std::vector<Rational> c((p.coeffs().size() + g - 1) / g + 1);
            for (std::size_t i = 0; i < p.coeffs().size(); ++i)
                if (!p.coeffs()[i].is_zero()) c[i / g] = p.coeffs()[i];
            return Poly<Rational>(std::move(c));
        };
        f_ = RatFunc<Rational>(shrink(f_.num()), shrink(f_.den()));
        level_ /= g;
    }

    u64 level_;
    RatFunc<Rational> f_;
};

inline std::optional<RatFunc<Rational>> decode_rational_ratfunc(u64 index) {
    auto decode_poly = [](u64 x) {
        auto [len, body] = cantor_unpair(x);
        std::vector<u64> entries = tuple_decode(body, len + 1);
        std::vector<Rational> coeffs;
        coeffs.reserve(entries.size());
        for (u64 e : entries) coeffs.push_back(rational_from_index(e));
        return Poly<Rational>(std::move(coeffs));
    };
    auto [ni, di] = cantor_unpair(index);
    Poly<Rational> den = decode_poly(di);
    if (den.is_zero()) return std::nullopt;
    return RatFunc<Rational>(decode_poly(ni), std::move(den));
}

// Field diagram of Q(t^{1/n}) with n the product of the scheduled odd primes
// (one committed per stage).  primes = {} gives Q(t).
inline std::shared_ptr<ValueStream<RadElt>> radical_field(std::vector<u64> primes,
                                                          u64 indices_per_stage = 8) {
    u64 full = 1;
    for (u64 p : primes) {
        if (p == 2) throw std::domain_error("level prime 2 unsupported");
        if (p < 3 || !is_prime_u64(p)) throw std::domain_error("levels must be odd primes");
        full *= p;
    }
    auto level_at = [primes](u64 s) {
        u64 r = 1;
        for (u64 i = 0; i < std::min<u64>(s, primes.size()); ++i) r *= primes[i];
        return r;
    };
    ValueStreamHooks<RadElt> h;
    h.sig = field_signature();
    h.candidate = [primes](u64 i, u64) -> std::optional<RadElt> {
        auto [li, rest] = cantor_unpair(i);
        if (li > primes.size()) return std::nullopt;
        u64 level = 1;
        for (u64 k = 0; k < li; ++k) level *= primes[k];
        auto f = decode_rational_ratfunc(rest);
        if (!f) return std::nullopt;
        return RadElt(level, std::move(*f));
    };
    h.member = [level_at, full](const RadElt& v, u64 s) {
        if (level_at(s) % v.level() == 0) return Tri::True;
        if (full % v.level() != 0) return Tri::False;
        return Tri::Unknown;
    };
    h.eval = field_eval<RadElt>();
    h.context = level_at;
    h.lift = [](const RadElt& v, u64) { return v; };  // canonical form is level-free
    h.indices_per_stage = indices_per_stage;
    return std::make_shared<ValueStream<RadElt>>(std::move(h));
}

}  // namespace wb
