#pragma once

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "workbench/diagrams.hpp"
#include "workbench/rational.hpp"

namespace wb {

// ---------------------------------------------------------------------------
// The monomial ring of a group diagram
// ---------------------------------------------------------------------------

// Finite Q-linear combination of group-element monomials Y_n, keyed by the
// group's element codes.  The empty map is the ring zero; {e-code: 1} is one.
class MonomialCombination {
public:
    MonomialCombination() = default;
    explicit MonomialCombination(std::map<u64, Rational> support) : m_(std::move(support)) { prune(); }
    static MonomialCombination monomial(u64 code, const Rational& coeff = Rational(1)) {
        return MonomialCombination({{code, coeff}});
    }

    const std::map<u64, Rational>& support() const { return m_; }
    bool is_zero() const { return m_.empty(); }

    friend MonomialCombination operator+(const MonomialCombination& a, const MonomialCombination& b) {
        MonomialCombination r = a;
        for (const auto& [k, v] : b.m_) r.m_[k] += v;
        r.prune();
        return r;
    }
    MonomialCombination operator-() const {
        MonomialCombination r = *this;
        for (auto& [k, v] : r.m_) v = -v;
        return r;
    }
    friend MonomialCombination operator-(const MonomialCombination& a, const MonomialCombination& b) {
        return a + (-b);
    }
    MonomialCombination scale(const Rational& q) const {
        MonomialCombination r = *this;
        for (auto& [k, v] : r.m_) v = v * q;
        r.prune();
        return r;
    }
    friend bool operator==(const MonomialCombination& a, const MonomialCombination& b) {
        return a.m_ == b.m_;
    }

    std::string str() const {
        if (m_.empty()) return "0";
        std::string out;
        for (const auto& [k, v] : m_) {
            if (!out.empty()) out += " + ";
            out += v.str() + "*Y[" + std::to_string(k) + "]";
        }
        return out;
    }

private:
    void prune() {
        for (auto it = m_.begin(); it != m_.end();) {
            if (it->second.is_zero()) it = m_.erase(it);
            else ++it;
        }
    }
    std::map<u64, Rational> m_;
};

// Convolution product over the committed group facts:
// (sum a_m Y_m)(sum b_n Y_n) = sum_k (sum_{m+n=k} a_m b_n) Y_k.
// nullopt when some needed sum m+n is uncommitted at the stage.
inline std::optional<MonomialCombination> ring_mul(const MonomialCombination& a,
                                                   const MonomialCombination& b, const DiagramStream& g,
                                                   u64 stage) {
    std::map<u64, Rational> acc;
    for (const auto& [m, am] : a.support())
        for (const auto& [n, bn] : b.support()) {
            auto k = read_op(g, stage, 1, {m, n});
            if (!k) return std::nullopt;
            acc[*k] += am * bn;
        }
    return MonomialCombination(std::move(acc));
}

// ---------------------------------------------------------------------------
// Field quotients
// ---------------------------------------------------------------------------

struct FieldQuotient {
    MonomialCombination num;
    MonomialCombination den;  // nonzero

    std::string str() const { return num.str() + " / " + den.str(); }
    std::string structural_key() const { return str(); }
};

enum class QuotientEq { Equal, Unequal, Unknown };

// A/B ~ A'/B' iff AB' = A'B; Unknown propagates from uncommitted products.
inline QuotientEq quotient_eq(const FieldQuotient& p, const FieldQuotient& q, const DiagramStream& g,
                              u64 stage) {
    if (p.den.is_zero() || q.den.is_zero()) throw std::domain_error("zero denominator");
    auto lhs = ring_mul(p.num, q.den, g, stage);
    if (!lhs) return QuotientEq::Unknown;
    auto rhs = ring_mul(q.num, p.den, g, stage);
    if (!rhs) return QuotientEq::Unknown;
    return *lhs == *rhs ? QuotientEq::Equal : QuotientEq::Unequal;
}

// Y_g / Y_e as a field quotient.
inline std::optional<FieldQuotient> monomial_map(u64 g_code, const DiagramStream& g, u64 stage) {
    auto e = read_op(g, stage, 0, {});
    if (!e) return std::nullopt;
    return FieldQuotient{MonomialCombination::monomial(g_code), MonomialCombination::monomial(*e)};
}

// Quotient-field arithmetic over committed facts; nullopt = unknown.
inline std::optional<FieldQuotient> quotient_add(const FieldQuotient& a, const FieldQuotient& b,
                                                 const DiagramStream& g, u64 stage, bool subtract = false) {
    auto ad = ring_mul(a.num, b.den, g, stage);
    if (!ad) return std::nullopt;
    auto cb = ring_mul(b.num, a.den, g, stage);
    if (!cb) return std::nullopt;
    auto dd = ring_mul(a.den, b.den, g, stage);
    if (!dd) return std::nullopt;
    return FieldQuotient{subtract ? *ad - *cb : *ad + *cb, *dd};
}

inline std::optional<FieldQuotient> quotient_mul(const FieldQuotient& a, const FieldQuotient& b,
                                                 const DiagramStream& g, u64 stage) {
    auto nn = ring_mul(a.num, b.num, g, stage);
    if (!nn) return std::nullopt;
    auto dd = ring_mul(a.den, b.den, g, stage);
    if (!dd) return std::nullopt;
    return FieldQuotient{*nn, *dd};
}

// ---------------------------------------------------------------------------
// Canonical enumeration of formal quotients
// ---------------------------------------------------------------------------

// Decode an index into a monomial combination: <count, body> where body is a
// (count+1)-tuple of <group code, rational index> entries.
inline MonomialCombination decode_combination(u64 index) {
    auto [count, body] = cantor_unpair(index);
    std::vector<u64> entries = tuple_decode(body, count + 1);
    std::map<u64, Rational> m;
    for (u64 e : entries) {
        auto [code, ridx] = cantor_unpair(e);
        m[code] += rational_from_index(ridx);
    }
    return MonomialCombination(std::move(m));
}

inline std::optional<FieldQuotient> decode_quotient(u64 index) {
    auto [ni, di] = cantor_unpair(index);
    MonomialCombination num = decode_combination(ni);
    MonomialCombination den = decode_combination(di);
    if (den.is_zero()) return std::nullopt;
    return FieldQuotient{std::move(num), std::move(den)};
}

// ---------------------------------------------------------------------------
// The emitted field copy Phi(G)
// ---------------------------------------------------------------------------

// Field diagram whose universe is a canonical system of representatives of
// formal quotients over G, committed in enumeration order once provably
// distinct from all earlier representatives.  Quotients with undecided status
// stay queued and are retried as G commits more facts.
class PhiStream : public DiagramStream {
public:
    explicit PhiStream(StreamPtr g, u64 indices_per_stage = 2, u64 retries_per_stage = 4)
        : g_(std::move(g)), ips_(indices_per_stage), rps_(retries_per_stage) {
        if (!(g_->sig() == group_signature())) throw std::domain_error("phi_object expects a GROUP stream");
    }

    const Signature& sig() const override { return field_signature(); }

    u64 code_bound(u64 stage) const override {
        process_to(stage);
        auto it = std::upper_bound(admit_stage_.begin(), admit_stage_.end(), stage);
        return static_cast<u64>(it - admit_stage_.begin());
    }

    std::optional<u64> op_at(u64 stage, u64 sym, const std::vector<u64>& args) const override {
        process_to(stage);
        u64 n = code_bound(stage);
        for (u64 a : args)
            if (a >= n) return std::nullopt;
        std::optional<FieldQuotient> r;
        switch (sym) {
            case 0: r = FieldQuotient{MonomialCombination(), unit_den(stage)}; break;
            case 1: {
                auto e = read_op(*g_, stage, 0, {});
                if (!e) return std::nullopt;
                r = FieldQuotient{MonomialCombination::monomial(*e), MonomialCombination::monomial(*e)};
                break;
            }
            case 2: r = quotient_add(reps_[args[0]], reps_[args[1]], *g_, stage); break;
            case 3: r = quotient_add(reps_[args[0]], reps_[args[1]], *g_, stage, true); break;
            case 4: r = quotient_mul(reps_[args[0]], reps_[args[1]], *g_, stage); break;
            default: return std::nullopt;
        }
        if (!r) return std::nullopt;
        return find_rep(*r, stage);
    }

    // Code of the representative provably equal to q at the stage, if any.
    std::optional<u64> find_rep(const FieldQuotient& q, u64 stage) const {
        process_to(stage);
        u64 n = code_bound(stage);
        for (u64 c = 0; c < n; ++c)
            if (quotient_eq(q, reps_[c], *g_, stage) == QuotientEq::Equal) return c;
        return std::nullopt;
    }

    const FieldQuotient& representative(u64 code) const {
        if (code >= reps_.size()) throw std::out_of_range("inactive code");
        return reps_[code];
    }
    StreamPtr group() const { return g_; }

private:
    MonomialCombination unit_den(u64 stage) const {
        auto e = read_op(*g_, stage, 0, {});
        if (e) return MonomialCombination::monomial(*e);
        // zero's denominator only needs to be nonzero; Y_0 works even before
        // the group commits its identity (0/Y_0 = 0/Y_e always)
        return MonomialCombination::monomial(0);
    }

    void process_to(u64 stage) const {
        while (processed_ + 1 <= static_cast<long long>(stage)) step(static_cast<u64>(processed_ + 1));
    }

    void step(u64 t) const {
        u64 tried = 0;
        std::deque<u64> requeue;
        while (!pending_.empty() && tried < rps_) {
            u64 idx = pending_.front();
            pending_.pop_front();
            ++tried;
            if (!classify(idx, t)) requeue.push_back(idx);
        }
        for (u64 i : requeue) pending_.push_back(i);
        for (u64 i = t * ips_; i < (t + 1) * ips_; ++i)
            if (!classify(i, t)) pending_.push_back(i);
        processed_ = static_cast<long long>(t);
    }

    // true when the index reached a final state (admitted or dropped)
    bool classify(u64 index, u64 t) const {
        auto q = decode_quotient(index);
        if (!q) return true;  // malformed (zero denominator): dropped
        for (const auto& rep : reps_) {
            switch (quotient_eq(*q, rep, *g_, t)) {
                case QuotientEq::Equal: return true;  // duplicate: dropped
                case QuotientEq::Unknown: return false;
                case QuotientEq::Unequal: break;
            }
        }
        reps_.push_back(std::move(*q));
        admit_stage_.push_back(t);
        return true;
    }

    StreamPtr g_;
    u64 ips_;
    u64 rps_;
    mutable long long processed_ = -1;
    mutable std::vector<FieldQuotient> reps_;
    mutable std::vector<u64> admit_stage_;
    mutable std::deque<u64> pending_;
};

using PhiPtr = std::shared_ptr<PhiStream>;

inline PhiPtr phi_object(StreamPtr g) { return std::make_shared<PhiStream>(std::move(g)); }

// ---------------------------------------------------------------------------
// Morphism action
// ---------------------------------------------------------------------------

struct morphism_violation_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Phi_* for a committed isomorphism prefix g: code map from G0-codes to
// G1-codes.  Maps Y_n -> Y_{g(n)} extended to combinations and quotients, and
// representative codes of Phi(G0) to representative codes of Phi(G1).
class PhiMorphism {
public:
    PhiMorphism(PhiPtr f0, std::function<std::optional<u64>(u64)> g, PhiPtr f1)
        : f0_(std::move(f0)), g_(std::move(g)), f1_(std::move(f1)) {}

    // Verify the homomorphism law on all committed facts of G0 whose elements
    // are in the map's domain (codes < code_cap).
    void validate(u64 stage, u64 code_cap) const {
        const DiagramStream& g0 = *f0_->group();
        const DiagramStream& g1 = *f1_->group();
        u64 bound = std::min(g0.code_bound(stage), code_cap);
        for (u64 a = 0; a < bound; ++a)
            for (u64 b = 0; b < bound; ++b) {
                auto c = read_op(g0, stage, 1, {a, b});
                if (!c) continue;
                auto ga = g_(a), gb = g_(b), gc = g_(*c);
                if (!ga || !gb || !gc) continue;
                auto img = read_op(g1, stage, 1, {*ga, *gb});
                if (img && *img != *gc)
                    throw morphism_violation_error("g is not a homomorphism on committed facts");
            }
    }

    std::optional<MonomialCombination> map_combination(const MonomialCombination& m) const {
        std::map<u64, Rational> out;
        for (const auto& [k, v] : m.support()) {
            auto gk = g_(k);
            if (!gk) return std::nullopt;
            out[*gk] += v;
        }
        return MonomialCombination(std::move(out));
    }

    std::optional<FieldQuotient> map_quotient(const FieldQuotient& q) const {
        auto n = map_combination(q.num);
        if (!n) return std::nullopt;
        auto d = map_combination(q.den);
        if (!d) return std::nullopt;
        return FieldQuotient{std::move(*n), std::move(*d)};
    }

    // Representative-code action at a stage; nullopt while the image is not
    // yet represented in Phi(G1).
    std::optional<u64> map_code(u64 code, u64 stage) const {
        if (code >= f0_->code_bound(stage)) return std::nullopt;
        auto img = map_quotient(f0_->representative(code));
        if (!img) return std::nullopt;
        return f1_->find_rep(*img, stage);
    }

private:
    PhiPtr f0_;
    std::function<std::optional<u64>(u64)> g_;
    PhiPtr f1_;
};

inline PhiMorphism phi_morphism(PhiPtr f0, std::function<std::optional<u64>(u64)> g, PhiPtr f1) {
    return PhiMorphism(std::move(f0), std::move(g), std::move(f1));
}

// ---------------------------------------------------------------------------
// Probes
// ---------------------------------------------------------------------------

struct ZeroDivisorReport {
    u64 trials_requested = 0;
    u64 products_checked = 0;
    u64 skipped_unknown = 0;
    std::vector<std::string> violations;
    bool clean() const { return violations.empty(); }
};

// Randomly sample nonzero combinations over committed codes and assert their
// ring products are nonzero (the emitted ring is an integral domain).
inline ZeroDivisorReport zero_divisor_probe(u64 trials, const DiagramStream& g, u64 stage, u64 seed) {
    ZeroDivisorReport rep;
    rep.trials_requested = trials;
    std::mt19937_64 rng(seed);
    u64 bound = g.code_bound(stage);
    if (bound == 0) return rep;
    auto sample = [&]() {
        std::map<u64, Rational> m;
        u64 terms = 1 + rng() % 3;
        for (u64 i = 0; i < terms; ++i) {
            u64 code = rng() % bound;
            long num = static_cast<long>(rng() % 9) - 4;
            if (num == 0) num = 1;
            m[code] += Rational(num, 1 + static_cast<long>(rng() % 3));
        }
        return MonomialCombination(std::move(m));
    };
    for (u64 i = 0; i < trials; ++i) {
        MonomialCombination a = sample(), b = sample();
        if (a.is_zero() || b.is_zero()) continue;
        auto p = ring_mul(a, b, g, stage);
        if (!p) {
            ++rep.skipped_unknown;
            continue;
        }
        ++rep.products_checked;
        if (p->is_zero())
            rep.violations.push_back("zero product: (" + a.str() + ") * (" + b.str() + ")");
    }
    return rep;
}

// Does Phi(G) contain a committed p-th root of X = Y_{unit}/Y_e at the stage?
// A root Y_h/Y_e with (Y_h)^p = Y_{unit} exists iff some committed group code
// h satisfies h + ... + h (p times) = unit, so the witness search runs over
// the group's committed facts.
inline bool root_of_x_evidence(const DiagramStream& g, u64 unit_code, u64 p, u64 stage) {
    if (p == 0) return false;
    u64 bound = g.code_bound(stage);
    for (u64 h = 0; h < bound; ++h) {
        std::optional<u64> acc = h;
        for (u64 i = 1; i < p && acc; ++i) acc = read_op(g, stage, 1, {*acc, h});
        if (acc && *acc == unit_code) return true;
    }
    return false;
}

}  // namespace wb
