#pragma once

#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "workbench/diagrams.hpp"

namespace wb {

// Generic diagram backing: a structure whose elements are exact values of
// type V, enumerated by a canonical index sequence and admitted stagewise.
// Element codes are assigned in admission order, so diagrams are deterministic
// and monotone by construction.
//
// - candidate(i, s): the i-th value of the canonical enumeration (as visible
//   at stage s); nullopt for skipped indices.
// - member(v, s): stagewise membership — True admits now (final), False drops
//   forever (final), Unknown re-queues the candidate for later stages.
// - eval(sym, vals): operation on values; nullopt when undefined.
// - context(s): monotone representation context (e.g. a cyclotomic conductor
//   or radical level).  When it grows, stored values are re-embedded with
//   lift and canonical keys are rebuilt, keeping codes stable.
template <class V>
struct ValueStreamHooks {
    Signature sig;
    std::function<std::optional<V>(u64 index, u64 stage)> candidate;
    std::function<Tri(const V&, u64 stage)> member = [](const V&, u64) { return Tri::True; };
    std::function<std::optional<V>(u64 sym, const std::vector<V>&, u64 stage)> eval;
    std::function<u64(u64 stage)> context = [](u64) { return u64(0); };
    std::function<std::string(const V&, u64 ctx)> key = [](const V& v, u64) { return v.str(); };
    std::function<V(const V&, u64 ctx)> lift = [](const V& v, u64) { return v; };
    u64 indices_per_stage = 1;
    u64 retry_interval = 1;
};

template <class V>
class ValueStream : public DiagramStream {
public:
    explicit ValueStream(ValueStreamHooks<V> hooks) : h_(std::move(hooks)) {}

    const Signature& sig() const override { return h_.sig; }

    u64 code_bound(u64 stage) const override {
        process_to(stage);
        return codes_at(stage);
    }

    std::optional<u64> op_at(u64 stage, u64 sym, const std::vector<u64>& args) const override {
        process_to(stage);
        u64 n = codes_at(stage);
        std::vector<V> vals;
        vals.reserve(args.size());
        for (u64 a : args) {
            if (a >= n) return std::nullopt;
            vals.push_back(values_[a]);
        }
        auto r = h_.eval(sym, vals, stage);
        if (!r) return std::nullopt;
        auto it = key_to_code_.find(h_.key(*r, ctx_));
        if (it == key_to_code_.end() || admit_stage_[it->second] > stage) return std::nullopt;
        return it->second;
    }

    // Value-level access (the internal oracle behind the diagram).
    const V& value(u64 code) const {
        if (code >= values_.size()) throw std::out_of_range("inactive code");
        return values_[code];
    }
    std::optional<u64> code_of(const V& v, u64 stage) const {
        process_to(stage);
        auto it = key_to_code_.find(h_.key(h_.lift(v, ctx_), ctx_));
        if (it == key_to_code_.end() || admit_stage_[it->second] > stage) return std::nullopt;
        return it->second;
    }
    u64 admitted_at(u64 code) const { return admit_stage_.at(code); }
    u64 current_context() const { return ctx_; }

private:
    u64 codes_at(u64 stage) const {
        // admit_stage_ is nondecreasing (admission order)
        auto it = std::upper_bound(admit_stage_.begin(), admit_stage_.end(), stage);
        return static_cast<u64>(it - admit_stage_.begin());
    }

    void process_to(u64 stage) const {
        while (processed_ + 1 <= static_cast<long long>(stage)) step(static_cast<u64>(processed_ + 1));
    }

    void step(u64 t) const {
        u64 ctx = h_.context(t);
        if (processed_ < 0 || ctx != ctx_) {
            ctx_ = ctx;
            for (auto& v : values_) v = h_.lift(v, ctx_);
            for (auto& v : pending_) v = h_.lift(v, ctx_);
            key_to_code_.clear();
            for (std::size_t c = 0; c < values_.size(); ++c) key_to_code_.emplace(h_.key(values_[c], ctx_), c);
        }
        if (h_.retry_interval > 0 && t % h_.retry_interval == 0) {
            std::vector<V> keep;
            for (auto& v : pending_) {
                Tri verdict = h_.member(v, t);
                if (verdict == Tri::True) admit(std::move(v), t);
                else if (verdict == Tri::Unknown) keep.push_back(std::move(v));
            }
            pending_ = std::move(keep);
        }
        for (u64 i = t * h_.indices_per_stage; i < (t + 1) * h_.indices_per_stage; ++i) {
            auto cand = h_.candidate(i, t);
            if (!cand) continue;
            V v = h_.lift(*cand, ctx_);
            Tri verdict = h_.member(v, t);
            if (verdict == Tri::True) admit(std::move(v), t);
            else if (verdict == Tri::Unknown) pending_.push_back(std::move(v));
        }
        processed_ = static_cast<long long>(t);
    }

    void admit(V v, u64 t) const {
        std::string k = h_.key(v, ctx_);
        if (key_to_code_.count(k)) return;
        u64 code = values_.size();
        values_.push_back(std::move(v));
        admit_stage_.push_back(t);
        key_to_code_.emplace(std::move(k), code);
    }

    ValueStreamHooks<V> h_;
    mutable long long processed_ = -1;
    mutable u64 ctx_ = 0;
    mutable std::vector<V> values_;
    mutable std::vector<u64> admit_stage_;
    mutable std::vector<V> pending_;
    mutable std::unordered_map<std::string, u64> key_to_code_;
};

// ---------------------------------------------------------------------------
// Stock evaluation hooks
// ---------------------------------------------------------------------------

// GROUP operations on any additive value type (+, unary -, zero_like).
template <class V>
std::function<std::optional<V>(u64, const std::vector<V>&, u64)> group_eval() {
    return [](u64 sym, const std::vector<V>& a, u64) -> std::optional<V> {
        switch (sym) {
            case 0: return a.empty() ? std::optional<V>(V{}.zero_like()) : std::nullopt;
            case 1: return a[0] + a[1];
            case 2: return -a[0];
            default: return std::nullopt;
        }
    };
}

// FIELD operations on any field value type.
template <class V>
std::function<std::optional<V>(u64, const std::vector<V>&, u64)> field_eval() {
    return [](u64 sym, const std::vector<V>& a, u64) -> std::optional<V> {
        switch (sym) {
            case 0: return V{}.zero_like();
            case 1: return V{}.zero_like().one_like();
            case 2: return a[0] + a[1];
            case 3: return a[0] - a[1];
            case 4: return a[0] * a[1];
            default: return std::nullopt;
        }
    };
}

}  // namespace wb
