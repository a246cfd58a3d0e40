#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "workbench/util.hpp"

namespace wb {

// ---------------------------------------------------------------------------
// Signatures
// ---------------------------------------------------------------------------

struct SymbolDef {
    std::string name;
    unsigned arity;  // 0 = constant
};

struct Signature {
    std::string name;
    std::vector<SymbolDef> symbols;

    u64 symbol_id(const std::string& sym) const {
        for (std::size_t i = 0; i < symbols.size(); ++i)
            if (symbols[i].name == sym) return i;
        throw std::domain_error("unknown symbol " + sym);
    }
    bool operator==(const Signature& o) const { return name == o.name; }
};

// Group signature: constant e, binary +, unary neg — in this order, so the
// fact (e, [], 0) is fact index 0.
inline const Signature& group_signature() {
    static const Signature sig{"GROUP", {{"e", 0}, {"+", 2}, {"neg", 1}}};
    return sig;
}

// Field signature: constants 0, 1; binary +, -, *.
inline const Signature& field_signature() {
    static const Signature sig{"FIELD", {{"0", 0}, {"1", 0}, {"+", 2}, {"-", 2}, {"*", 2}}};
    return sig;
}

// ---------------------------------------------------------------------------
// Atomic facts and their Godel numbering
// ---------------------------------------------------------------------------

// Operation fact sym(args...) = res, encoded relationally as the graph of the
// operation.  Constants are arity-0 operations.
struct Fact {
    u64 sym;
    std::vector<u64> args;
    u64 res;

    bool operator==(const Fact& o) const { return sym == o.sym && args == o.args && res == o.res; }
};

struct malformed_fact_error : std::domain_error {
    using std::domain_error::domain_error;
};

inline void validate_fact(const Signature& sig, u64 sym, const std::vector<u64>& args) {
    if (sym >= sig.symbols.size()) throw malformed_fact_error("symbol id out of range");
    if (args.size() != sig.symbols[sym].arity) throw malformed_fact_error("arity mismatch");
}

// index = body * m + sym, where m = #symbols and body is the left-nested
// Cantor code of (args..., res).  Bijective between naturals and well-formed
// facts; (e, [], 0) -> 0 under the GROUP signature.
inline u64 fact_index(const Signature& sig, const Fact& f) {
    validate_fact(sig, f.sym, f.args);
    std::vector<u64> t = f.args;
    t.push_back(f.res);
    u64 body = tuple_encode(t);
    u64 m = sig.symbols.size();
    unsigned __int128 idx = static_cast<unsigned __int128>(body) * m + f.sym;
    if (idx > static_cast<unsigned __int128>(UINT64_MAX)) throw overflow_error("fact index overflow");
    return static_cast<u64>(idx);
}

inline Fact fact_decode(const Signature& sig, u64 index) {
    u64 m = sig.symbols.size();
    u64 sym = index % m;
    u64 body = index / m;
    std::size_t arity = sig.symbols[sym].arity;
    std::vector<u64> t = tuple_decode(body, arity + 1);
    Fact f;
    f.sym = sym;
    f.res = t.back();
    t.pop_back();
    f.args = std::move(t);
    return f;
}

// ---------------------------------------------------------------------------
// Diagram streams
// ---------------------------------------------------------------------------

struct corrupt_stream_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A structure with universe omega, revealed stagewise.  At stage s the codes
// below code_bound(s) (or those passing code_active) are in play; op_at
// reports the committed result of an operation on active arguments, or
// nullopt while the fact is still unknown.  Implementations must be monotone:
// results never change and active codes never retire.
class DiagramStream {
public:
    virtual ~DiagramStream() = default;
    virtual const Signature& sig() const = 0;
    // All active codes at `stage` are < code_bound(stage); monotone in stage.
    virtual u64 code_bound(u64 stage) const = 0;
    virtual bool code_active(u64 code, u64 stage) const { return code < code_bound(stage); }
    virtual std::optional<u64> op_at(u64 stage, u64 sym, const std::vector<u64>& args) const = 0;
};

using StreamPtr = std::shared_ptr<DiagramStream>;

// Committed result of sym(args) at `stage`, or nullopt for unknown.
inline std::optional<u64> read_op(const DiagramStream& d, u64 stage, u64 sym,
                                  const std::vector<u64>& args) {
    validate_fact(d.sig(), sym, args);
    for (u64 a : args)
        if (!d.code_active(a, stage)) return std::nullopt;
    return d.op_at(stage, sym, args);
}

inline std::optional<u64> read_op(const DiagramStream& d, u64 stage, const std::string& sym,
                                  const std::vector<u64>& args) {
    return read_op(d, stage, d.sig().symbol_id(sym), args);
}

// Three-valued truth of an atomic fact at a stage.
inline Tri fact_status(const DiagramStream& d, u64 stage, const Fact& f) {
    auto r = read_op(d, stage, f.sym, f.args);
    if (!r) return Tri::Unknown;
    return *r == f.res ? Tri::True : Tri::False;
}

// ---------------------------------------------------------------------------
// Scripted streams (test fixtures)
// ---------------------------------------------------------------------------

// A stream given by an explicit finite script of commitments; used for unit
// fixtures, including deliberately corrupted ones for auditor sensitivity.
class ScriptedStream : public DiagramStream {
public:
    struct Entry {
        u64 stage;
        Fact fact;
    };
    ScriptedStream(const Signature& sig, std::vector<Entry> entries, std::function<u64(u64)> bound)
        : sig_(sig), entries_(std::move(entries)), bound_(std::move(bound)) {}

    const Signature& sig() const override { return sig_; }
    u64 code_bound(u64 stage) const override { return bound_(stage); }
    std::optional<u64> op_at(u64 stage, u64 sym, const std::vector<u64>& args) const override {
        // Later entries win, which lets fixtures script monotonicity
        // violations on purpose.
        std::optional<u64> r;
        for (const auto& e : entries_)
            if (e.stage <= stage && e.fact.sym == sym && e.fact.args == args) r = e.fact.res;
        return r;
    }

private:
    const Signature& sig_;
    std::vector<Entry> entries_;
    std::function<u64(u64)> bound_;
};

// ---------------------------------------------------------------------------
// Joins and operators
// ---------------------------------------------------------------------------

// Join of finitely many component streams; bit n of component i sits at
// global bit <i, n>.
class JoinedStream {
public:
    explicit JoinedStream(std::vector<StreamPtr> comps) : comps_(std::move(comps)) {}

    std::size_t size() const { return comps_.size(); }
    StreamPtr project(std::size_t i) const {
        if (i >= comps_.size()) throw std::out_of_range("join component out of range");
        return comps_[i];
    }
    static u64 global_bit(u64 component, u64 bit) { return cantor_pair(component, bit); }
    static std::pair<u64, u64> locate_bit(u64 global) { return cantor_unpair(global); }

private:
    std::vector<StreamPtr> comps_;
};

using JoinPtr = std::shared_ptr<JoinedStream>;

inline JoinPtr join(std::vector<StreamPtr> comps) {
    return std::make_shared<JoinedStream>(std::move(comps));
}

using DiagramOperator = std::function<StreamPtr(StreamPtr)>;

inline DiagramOperator identity_operator() {
    return [](StreamPtr s) { return s; };
}

// compose(g, f)(x) = g(f(x)).
inline DiagramOperator compose(DiagramOperator g, DiagramOperator f) {
    return [g = std::move(g), f = std::move(f)](StreamPtr s) { return g(f(s)); };
}

// Operator emitting the join (c, op(input)).
inline std::function<JoinPtr(StreamPtr)> pair_with_constant(StreamPtr c, DiagramOperator op) {
    return [c = std::move(c), op = std::move(op)](StreamPtr s) { return join({c, op(s)}); };
}

// ---------------------------------------------------------------------------
// Code permutations
// ---------------------------------------------------------------------------

// Finite-support permutation of omega (identity outside the table).
class FiniteSupportPermutation {
public:
    FiniteSupportPermutation() = default;
    explicit FiniteSupportPermutation(std::map<u64, u64> table) : fwd_(std::move(table)) {
        for (const auto& [a, b] : fwd_) {
            if (!inv_.emplace(b, a).second) throw std::domain_error("not injective");
        }
        for (const auto& [a, b] : fwd_)
            if (fwd_.count(b) == 0 && a != b) throw std::domain_error("support not closed");
    }
    u64 operator()(u64 x) const {
        auto it = fwd_.find(x);
        return it == fwd_.end() ? x : it->second;
    }
    u64 inverse(u64 x) const {
        auto it = inv_.find(x);
        return it == inv_.end() ? x : it->second;
    }
    u64 max_moved() const { return fwd_.empty() ? 0 : std::prev(inv_.end())->first + 1; }

private:
    std::map<u64, u64> fwd_;
    std::map<u64, u64> inv_;
};

// Isomorphic copy of a stream with codes relabeled by a finite-support
// permutation.
class PermutedStream : public DiagramStream {
public:
    PermutedStream(StreamPtr base, FiniteSupportPermutation p) : base_(std::move(base)), p_(std::move(p)) {}

    const Signature& sig() const override { return base_->sig(); }
    u64 code_bound(u64 stage) const override {
        return std::max(base_->code_bound(stage), p_.max_moved());
    }
    bool code_active(u64 code, u64 stage) const override {
        return base_->code_active(p_.inverse(code), stage);
    }
    std::optional<u64> op_at(u64 stage, u64 sym, const std::vector<u64>& args) const override {
        std::vector<u64> pre(args.size());
        for (std::size_t i = 0; i < args.size(); ++i) {
            pre[i] = p_.inverse(args[i]);
            if (!base_->code_active(pre[i], stage)) return std::nullopt;
        }
        auto r = base_->op_at(stage, sym, pre);
        if (!r) return std::nullopt;
        return p_(*r);
    }
    const FiniteSupportPermutation& permutation() const { return p_; }
    StreamPtr base() const { return base_; }

private:
    StreamPtr base_;
    FiniteSupportPermutation p_;
};

inline StreamPtr permute_stream(StreamPtr base, FiniteSupportPermutation p) {
    return std::make_shared<PermutedStream>(std::move(base), std::move(p));
}

// ---------------------------------------------------------------------------
// Monotonicity / functionality audit
// ---------------------------------------------------------------------------

struct AuditReport {
    std::vector<std::string> violations;
    u64 queries = 0;
    bool clean() const { return violations.empty(); }
};

// Replays all operation queries over active codes (capped) across stages
// 0..max_stage and checks that committed results never change, active codes
// never retire, and code bounds are monotone.
inline AuditReport audit_stream(const DiagramStream& d, u64 max_stage, u64 code_cap = 64) {
    AuditReport rep;
    std::map<std::pair<u64, std::vector<u64>>, u64> committed;
    u64 prev_bound = 0;
    for (u64 s = 0; s <= max_stage; ++s) {
        u64 bound = std::min<u64>(d.code_bound(s), code_cap);
        if (d.code_bound(s) < prev_bound)
            rep.violations.push_back("code_bound decreased at stage " + std::to_string(s));
        prev_bound = d.code_bound(s);
        for (u64 sym = 0; sym < d.sig().symbols.size(); ++sym) {
            unsigned ar = d.sig().symbols[sym].arity;
            std::vector<u64> args(ar, 0);
            while (true) {
                bool all_active = true;
                for (u64 a : args) all_active = all_active && d.code_active(a, s);
                if (all_active) {
                    ++rep.queries;
                    auto r = d.op_at(s, sym, args);
                    auto key = std::make_pair(sym, args);
                    auto it = committed.find(key);
                    if (it != committed.end()) {
                        if (!r)
                            rep.violations.push_back("committed fact went unknown at stage " +
                                                     std::to_string(s));
                        else if (*r != it->second)
                            rep.violations.push_back("result changed at stage " + std::to_string(s) +
                                                     " for symbol " + d.sig().symbols[sym].name);
                    } else if (r) {
                        committed.emplace(key, *r);
                    }
                }
                // advance the args odometer below `bound`
                std::size_t i = 0;
                for (; i < args.size(); ++i) {
                    if (++args[i] < bound) break;
                    args[i] = 0;
                }
                if (ar == 0 || i == args.size()) break;
            }
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// JSONL emission
// ---------------------------------------------------------------------------

// One event per newly committed positive fact:
//   {"stage": t, "fact": {"sym": "+", "args": [3,5], "res": 7}, "bit": n}
// Per stage, events are ordered by the largest element code involved, then by
// fact index.
inline void write_diagram_events(const DiagramStream& d, u64 max_stage, std::ostream& out,
                                 u64 code_cap = UINT64_MAX) {
    std::map<std::pair<u64, std::vector<u64>>, u64> emitted;
    for (u64 s = 0; s <= max_stage; ++s) {
        u64 bound = std::min<u64>(d.code_bound(s), code_cap);
        // (max code involved, fact index, fact)
        std::vector<std::tuple<u64, u64, Fact>> batch;
        for (u64 sym = 0; sym < d.sig().symbols.size(); ++sym) {
            unsigned ar = d.sig().symbols[sym].arity;
            std::vector<u64> args(ar, 0);
            while (true) {
                bool all_active = true;
                for (u64 a : args) all_active = all_active && d.code_active(a, s);
                if (all_active && !emitted.count({sym, args})) {
                    auto r = d.op_at(s, sym, args);
                    if (r) {
                        emitted.emplace(std::make_pair(sym, args), *r);
                        Fact f{sym, args, *r};
                        u64 maxcode = *r;
                        for (u64 a : args) maxcode = std::max(maxcode, a);
                        batch.emplace_back(maxcode, fact_index(d.sig(), f), f);
                    }
                }
                std::size_t i = 0;
                for (; i < args.size(); ++i) {
                    if (++args[i] < bound) break;
                    args[i] = 0;
                }
                if (ar == 0 || i == args.size()) break;
            }
        }
        std::sort(batch.begin(), batch.end(),
                  [](const auto& a, const auto& b) {
                      if (std::get<0>(a) != std::get<0>(b)) return std::get<0>(a) < std::get<0>(b);
                      return std::get<1>(a) < std::get<1>(b);
                  });
        for (const auto& [maxcode, bit, f] : batch) {
            (void)maxcode;
            nlohmann::ordered_json j;
            j["stage"] = s;
            j["fact"] = {{"sym", d.sig().symbols[f.sym].name}, {"args", f.args}, {"res", f.res}};
            j["bit"] = bit;
            out << j.dump() << "\n";
        }
    }
}

// Raw bit format: {"bit": n, "val": 0|1, "stage": t} with t the first stage at
// which the bit's value was committed.  Undetermined bits are skipped.
inline void write_raw_bits(const DiagramStream& d, u64 max_stage, u64 bit_count, std::ostream& out) {
    for (u64 bit = 0; bit < bit_count; ++bit) {
        Fact f = fact_decode(d.sig(), bit);
        Tri final = fact_status(d, max_stage, f);
        if (final == Tri::Unknown) continue;
        u64 lo = 0, hi = max_stage;  // first stage with status == final (monotone)
        while (lo < hi) {
            u64 mid = lo + (hi - lo) / 2;
            if (fact_status(d, mid, f) == final) hi = mid;
            else lo = mid + 1;
        }
        nlohmann::ordered_json j;
        j["bit"] = bit;
        j["val"] = final == Tri::True ? 1 : 0;
        j["stage"] = lo;
        out << j.dump() << "\n";
    }
}

}  // namespace wb
