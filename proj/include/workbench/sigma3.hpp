#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "workbench/diagrams.hpp"
#include "workbench/rational.hpp"
#include "workbench/tfab.hpp"
#include "workbench/value_stream.hpp"

namespace wb {

// ===========================================================================
// Chip-driven reduction from a Sigma_3 equivalence relation on a family of
// {0,1} streams to a countable family of rank-1 groups (subgroups of Q):
// for all m < n, A_m E A_n iff G_m and G_n are isomorphic.
//
// Architecture: a single append-only chip scheduler realizes the chip
// functions for all pairs at once; each prime p_{m,n,k} is controlled by an
// independent per-triple state machine that consumes the shared chip log.
// Machines are instantiated on demand — a membership query touches only the
// machines owning the primes in the queried denominator — because a global
// per-stage sweep would have to touch infinitely many triples (any chip of
// small value concerns triples (m,n,k) for unboundedly many k).
// ===========================================================================

struct sequencing_error : std::logic_error {
    using std::logic_error::logic_error;
};

// ---------------------------------------------------------------------------
// Oracle families and Sigma_3 relations
// ---------------------------------------------------------------------------

// A countable family of total {0,1} streams A_0, A_1, ...  Finitely many are
// given explicitly; every later index yields the constant tail stream, so the
// family is total at every index.
struct OracleFamily {
    std::vector<BitStream> streams;
    BitStream tail = BitStream::constant(0);

    const BitStream& at(u64 i) const {
        return i < streams.size() ? streams[i] : tail;
    }
    u64 described() const { return streams.size(); }
};

// A E B  iff  exists x, forall y, exists z, holds(A, B, x, y, z).
// `use_bound(x,y,z)` declares how many stream positions a single query may
// read; it keeps every scheduler stage finite by construction and is recorded
// alongside results.
struct Sigma3Relation {
    std::string name;
    std::function<bool(const BitStream&, const BitStream&, u64 x, u64 y, u64 z)> holds;
    std::function<u64(u64 x, u64 y, u64 z)> use_bound;
};

inline Sigma3Relation rel_const_true() {
    return {"const-true",
            [](const BitStream&, const BitStream&, u64, u64, u64) { return true; },
            [](u64, u64, u64) { return u64(0); }};
}

inline Sigma3Relation rel_const_false() {
    return {"const-false",
            [](const BitStream&, const BitStream&, u64, u64, u64) { return false; },
            [](u64, u64, u64) { return u64(0); }};
}

// Eventual agreement: A E B iff the streams differ at only finitely many
// positions.  holds = (y <= x) or A(y) = B(y); the witness x bounds the last
// disagreement and z is unused.
inline Sigma3Relation rel_e0() {
    return {"e0",
            [](const BitStream& a, const BitStream& b, u64 x, u64 y, u64) {
                return y <= x || a.at(y) == b.at(y);
            },
            [](u64, u64 y, u64) { return y + 1; }};
}

// ---------------------------------------------------------------------------
// Triple coding: primes p_{m,n,k} and pair-owned scheduler stages
// ---------------------------------------------------------------------------

struct Triple {
    u64 m = 0, n = 0, k = 0;
    u64 big_n() const { return n + k; }
    std::string str() const {
        std::ostringstream os;
        os << "(" << m << "," << n << "," << k << ")";
        return os.str();
    }
};

inline u64 pair_index(u64 m, u64 n) {
    if (!(m < n)) throw std::domain_error("pair requires m < n");
    return cantor_pair(m, n - m - 1);
}

inline std::pair<u64, u64> pair_of_index(u64 a) {
    auto [m, d] = cantor_unpair(a);
    return {m, m + 1 + d};
}

inline u64 triple_index(u64 m, u64 n, u64 k) { return cantor_pair(pair_index(m, n), k); }

inline Triple triple_of_index(u64 i) {
    auto [a, k] = cantor_unpair(i);
    auto [m, n] = pair_of_index(a);
    return {m, n, k};
}

// The bijection between primes and triples (m,n,k) with m < n.
inline u64 reduction_prime(u64 m, u64 n, u64 k) { return nth_prime(triple_index(m, n, k)); }

inline Triple triple_of_prime(u64 p) {
    if (!is_prime_u64(p)) throw std::domain_error("triple_of_prime expects a prime");
    return triple_of_index(prime_index(p));
}

// ---------------------------------------------------------------------------
// Chip scheduler
// ---------------------------------------------------------------------------

struct Chip {
    u64 stage;  // global stage at which the chip was awarded
    u64 m, n;   // owning pair, m < n
    u64 value;  // awarded value k
};

// Realizes the chip functions c_{m,n} for all pairs at once.  Global stage
// T = <a, s> is the s-th stage owned by pair a, so each stage belongs to
// exactly one pair.  At an even local stage s = 2<k,j> the pair performs the
// expansionary check for k: the Pi_2 statement "exists x <= k, forall y,
// exists z, holds" is approximated by agreement frontiers l(x) (how many y
// have a verified z, with all searches bounded by the global stage); k is
// awarded exactly when some l(x) grew past its snapshot.  Otherwise — and at
// every odd local stage — the pair awards its least never-awarded value, which
// secures totality and image omega.  The log is append-only and shared by all
// consumers.
class ChipScheduler {
public:
    ChipScheduler(OracleFamily fam, Sigma3Relation rel)
        : fam_(std::move(fam)), rel_(std::move(rel)) {}

    const std::string& relation_name() const { return rel_.name; }
    const OracleFamily& family() const { return fam_; }

    void run_to(u64 stage) {
        while (log_.size() <= stage) step();
    }
    const Chip& chip_at(u64 stage) {
        run_to(stage);
        return log_[stage];
    }
    u64 processed() const { return log_.size(); }
    const std::vector<Chip>& log() const { return log_; }

    // Number of chips awarded to (m,n,k) at stages < stage_end (which must
    // already be processed).
    u64 chip_count(u64 m, u64 n, u64 k, u64 stage_end) const {
        if (stage_end > log_.size()) throw std::out_of_range("chip_count beyond processed log");
        u64 c = 0;
        for (u64 t = 0; t < stage_end; ++t)
            if (log_[t].m == m && log_[t].n == n && log_[t].value == k) ++c;
        return c;
    }

    // Current agreement frontier l(x) for the pair (m,n); 0 if never checked.
    u64 agreement_length(u64 m, u64 n, u64 x) const {
        auto it = pairs_.find(pair_index(m, n));
        if (it == pairs_.end()) return 0;
        auto jt = it->second.frontier.find(x);
        return jt == it->second.frontier.end() ? 0 : jt->second.y;
    }

private:
    struct Frontier {
        u64 y = 0;  // number of y-values with a verified z so far
        u64 z = 0;  // next z to try for the current y
    };
    struct PairState {
        u64 least_never = 0;
        std::set<u64> awarded;
        std::map<u64, Frontier> frontier;          // x -> frontier
        std::map<u64, std::vector<u64>> snapshot;  // k -> last seen l(x), x = 0..k
    };

    // Resume the z-search for (pair, x) with all searches bounded by `bound`;
    // the frontier only moves forward, so total work is amortized linear in
    // the final bound.
    void advance_frontier(PairState& st, u64 m, u64 n, u64 x, u64 bound) {
        const BitStream& A = fam_.at(m);
        const BitStream& B = fam_.at(n);
        Frontier& fr = st.frontier[x];
        while (fr.y <= bound) {
            bool found = false;
            for (u64 z = fr.z; z <= bound; ++z) {
                if (rel_.holds(A, B, x, fr.y, z)) {
                    found = true;
                    break;
                }
            }
            if (!found) {
                fr.z = bound + 1;
                return;
            }
            ++fr.y;
            fr.z = 0;
        }
    }

    void step() {
        u64 T = log_.size();
        auto [a, s] = cantor_unpair(T);
        auto [m, n] = pair_of_index(a);
        PairState& st = pairs_[a];
        std::optional<u64> award;
        if (s % 2 == 0) {
            u64 k = cantor_unpair(s / 2).first;
            auto& snap = st.snapshot[k];
            if (snap.size() < k + 1) snap.resize(k + 1, 0);
            bool grew = false;
            for (u64 x = 0; x <= k; ++x) {
                advance_frontier(st, m, n, x, T);
                u64 len = st.frontier[x].y;
                if (len > snap[x]) grew = true;
                snap[x] = len;
            }
            if (grew) award = k;
        }
        if (!award) award = st.least_never;
        st.awarded.insert(*award);
        while (st.awarded.count(st.least_never)) ++st.least_never;
        log_.push_back({T, m, n, *award});
    }

    OracleFamily fam_;
    Sigma3Relation rel_;
    std::map<u64, PairState> pairs_;
    std::vector<Chip> log_;
};

// ---------------------------------------------------------------------------
// Per-triple state machines
// ---------------------------------------------------------------------------

// The procedure for one triple (m,n,k) with m < n, controlling the negative
// powers of p = p_{m,n,k} in every group of the family.  Writing N = n + k and
// r for the key exponent (the least r > 0 with p^{-r} not in G_m), the full
// membership state is summarized by r, the side tags of the indices l <= N
// under the order  m < n < 0 < 1 < ... < N  (skipping m and n), and one flag
// for the uniform block l > N:
//
//     p^{-e} in G_l  iff  e <= r-1, or e = r and l is tagged N-side.
//
// Machine stage T consumes the chip awarded at scheduler stage T-1.  A chip
// c_{m,n} = k promotes outright; otherwise a promotion fires when some l <= N
// outside {m,n} has a lookback record pointing at j (the latest chip c_{j,l}
// of value <= N with j before l) whose side disagrees with l's.  Promotion
// bumps r and recomputes the tags in order: m stays M-side, n stays N-side,
// every other l copies its recorded j's tag or falls to M-side without a
// record, and the block l > N is N-side from the first promotion on.
class TripleMachine {
public:
    TripleMachine(u64 m, u64 n, u64 k) : m_(m), n_(n), k_(k), N_(n + k) {
        if (!(m < n)) throw std::domain_error("triple requires m < n");
        prec_.push_back(m_);
        prec_.push_back(n_);
        for (u64 l = 0; l <= N_; ++l)
            if (l != m_ && l != n_) prec_.push_back(l);
        pos_.assign(N_ + 1, 0);
        for (std::size_t i = 0; i < prec_.size(); ++i) pos_[prec_[i]] = i;
        nside_.assign(N_ + 1, false);
        nside_[n_] = true;
        rec_.assign(N_ + 1, std::nullopt);
    }

    u64 m() const { return m_; }
    u64 n() const { return n_; }
    u64 k() const { return k_; }
    u64 big_n() const { return N_; }
    u64 prime() const { return reduction_prime(m_, n_, k_); }
    u64 stage() const { return stage_; }
    u64 key_exponent() const { return r_; }
    bool promoted() const { return promoted_; }

    bool tag_nside(u64 l) const { return l <= N_ ? nside_[l] : promoted_; }

    // p^{-e} in G_l at the machine's current stage.
    bool admits(u64 l, u64 e) const {
        if (e == 0) return true;
        return e + 1 <= r_ || (e == r_ && tag_nside(l));
    }

    // Largest e with p^{-e} in G_l (memberships are downward closed).
    u64 depth(u64 l) const { return r_ - 1 + (tag_nside(l) ? 1 : 0); }

    // Process machine stage T, consuming the chip at scheduler stage T-1.
    void step(u64 T, const std::vector<Chip>& log) {
        if (T != stage_ + 1) throw sequencing_error("machine stage gap");
        if (log.size() < T) throw sequencing_error("scheduler log too short");
        const Chip& c = log[T - 1];

        // Lookback records first: the chip at stage T-1 itself may serve as
        // the latest qualifying stage.  Both orientations of the pair are
        // considered (the chip functions are symmetric).
        if (c.value <= N_) {
            update_record(c.m, c.n, T - 1);
            update_record(c.n, c.m, T - 1);
        }

        bool promote = false;
        if (c.m == m_ && c.n == n_ && c.value == k_) {
            promote = true;
        } else {
            for (std::size_t i = 2; i < prec_.size() && !promote; ++i) {
                u64 l = prec_[i];
                if (rec_[l] && nside_[rec_[l]->j] != nside_[l]) promote = true;
            }
        }
        if (promote) {
            ++r_;
            promoted_ = true;
            nside_[m_] = false;
            nside_[n_] = true;
            // In order: each l copies the new tag of its recorded j (already
            // recomputed, since j comes earlier), or falls to M-side.
            for (std::size_t i = 2; i < prec_.size(); ++i) {
                u64 l = prec_[i];
                nside_[l] = rec_[l] ? nside_[rec_[l]->j] : false;
            }
        }
        stage_ = T;
    }

    void run_to(u64 stage, ChipScheduler& sched) {
        if (stage > stage_) sched.run_to(stage - 1);
        while (stage_ < stage) step(stage_ + 1, sched.log());
    }

    // Fault-injection hook for auditor sensitivity checks.
    void corrupt_tag(u64 l) { nside_.at(l) = !nside_.at(l); }

private:
    struct Record {
        u64 j;  // the partner before l in the order
        u64 t;  // scheduler stage of the chip
    };

    bool before(u64 j, u64 l) const { return pos_[j] < pos_[l]; }

    void update_record(u64 j, u64 l, u64 t) {
        if (j > N_ || l > N_ || l == m_ || l == n_) return;
        if (!before(j, l)) return;
        rec_[l] = Record{j, t};
    }

    u64 m_, n_, k_, N_;
    std::vector<u64> prec_;  // indices <= N in the order m, n, 0, 1, ...
    std::vector<u64> pos_;   // position of each index in prec_
    std::vector<char> nside_;
    std::vector<std::optional<Record>> rec_;
    u64 r_ = 1;
    bool promoted_ = false;
    u64 stage_ = 0;
};

// ---------------------------------------------------------------------------
// Family view: membership dispatch and diagram emission
// ---------------------------------------------------------------------------

// Shared context of one reduction run: the scheduler plus a cache of triple
// machines, instantiated on demand and only ever advanced forward.
class ReductionFamily {
public:
    ReductionFamily(OracleFamily fam, Sigma3Relation rel)
        : sched_(std::move(fam), std::move(rel)) {}

    ChipScheduler& scheduler() { return sched_; }

    TripleMachine& machine(u64 m, u64 n, u64 k, u64 stage) {
        auto it = machines_.try_emplace(triple_index(m, n, k), m, n, k).first;
        if (it->second.stage() < stage) it->second.run_to(stage, sched_);
        return it->second;
    }

    TripleMachine& machine_for_prime(u64 p, u64 stage) {
        Triple t = triple_of_prime(p);
        return machine(t.m, t.n, t.k, stage);
    }

    // p^{-e} in G_l at `stage`.
    bool admits(u64 l, u64 p, u64 e, u64 stage) {
        return machine_for_prime(p, stage).admits(l, e);
    }

    // q in G_{l, stage}.  G_l contains Z and is generated by the admitted
    // prime powers, so a reduced q = num/den lies in G_l iff every prime-power
    // factor of den is admitted (the numerator is coprime to den).
    bool membership(u64 l, const Rational& q, u64 stage) {
        if (q.is_integer()) return true;
        mpz_class den = q.den();
        if (!den.fits_ulong_p()) return false;
        for (auto [p, e] : factorize(den.get_ui()))
            if (!admits(l, p, e, stage)) return false;
        return true;
    }

private:
    ChipScheduler sched_;
    std::map<u64, TripleMachine> machines_;  // keyed by triple index
};

using FamilyPtr = std::shared_ptr<ReductionFamily>;

inline FamilyPtr make_family(OracleFamily fam, Sigma3Relation rel) {
    return std::make_shared<ReductionFamily>(std::move(fam), std::move(rel));
}

// One output group G_l as a diagram stream: rationals enumerated canonically,
// admitted once the membership dispatch confirms them.  Membership only grows
// (promotions never retract an admitted power), so verdicts are True or
// Unknown, never False.  Pending candidates are re-examined every 16 stages,
// which bounds the retry cost without affecting the limit.
inline StreamPtr sigma3_group_stream(FamilyPtr ctx, u64 l) {
    ValueStreamHooks<Rational> h;
    h.sig = group_signature();
    h.candidate = [](u64 i, u64) -> std::optional<Rational> { return rational_from_index(i); };
    h.member = [ctx, l](const Rational& q, u64 s) -> Tri {
        return ctx->membership(l, q, s) ? Tri::True : Tri::Unknown;
    };
    h.eval = group_eval<Rational>();
    h.retry_interval = 16;
    return std::make_shared<ValueStream<Rational>>(h);
}

// The reduction: component l of the join presents G_l.  For all m < n,
// A_m E A_n iff G_m and G_n are isomorphic in the limit.
inline JoinPtr sigma3_reduce(FamilyPtr ctx, u64 indices) {
    std::vector<StreamPtr> comps;
    for (u64 l = 0; l < indices; ++l) comps.push_back(sigma3_group_stream(ctx, l));
    return std::make_shared<JoinedStream>(std::move(comps));
}

inline JoinPtr sigma3_reduce(OracleFamily fam, Sigma3Relation rel, u64 indices) {
    return sigma3_reduce(make_family(std::move(fam), std::move(rel)), indices);
}

// ---------------------------------------------------------------------------
// Invariant auditing
// ---------------------------------------------------------------------------

struct Sigma3AuditReport {
    u64 stages_checked = 0;
    u64 triples_checked = 0;
    std::vector<std::string> violations;
    bool clean() const { return violations.empty(); }
};

// Replays every sampled triple from the shared log, checking per stage that
// the key exponent never decreases, m stays M-side and n stays N-side, every
// group contains p^{-(r-1)} and none contains p^{-(r+1)}, and each group sides
// with G_m or with G_n at p^{-r}.  The cached machine of the family context is
// then compared against the replay, so corrupted cached state is reported.
inline Sigma3AuditReport sigma3_audit(ReductionFamily& ctx, u64 stage,
                                      const std::vector<Triple>& triples,
                                      u64 index_bound = 8) {
    Sigma3AuditReport rep;
    rep.stages_checked = stage;
    rep.triples_checked = triples.size();
    if (stage > 0) ctx.scheduler().run_to(stage - 1);
    auto complain = [&](const Triple& t, u64 s, const std::string& what) {
        std::ostringstream os;
        os << "triple " << t.str() << " stage " << s << ": " << what;
        rep.violations.push_back(os.str());
    };
    for (const Triple& t : triples) {
        TripleMachine fresh(t.m, t.n, t.k);
        u64 prev_r = fresh.key_exponent();
        for (u64 s = 0; s <= stage; ++s) {
            if (s > 0) fresh.step(s, ctx.scheduler().log());
            u64 r = fresh.key_exponent();
            if (r < prev_r) complain(t, s, "key exponent decreased");
            prev_r = r;
            if (fresh.tag_nside(t.m)) complain(t, s, "m not M-side");
            if (!fresh.tag_nside(t.n)) complain(t, s, "n not N-side");
            for (u64 l = 0; l <= index_bound; ++l) {
                if (!fresh.admits(l, r - 1)) complain(t, s, "floor power missing");
                if (fresh.admits(l, r + 1)) complain(t, s, "ceiling power present");
                bool has_r = fresh.admits(l, r);
                if (has_r != fresh.tag_nside(l)) complain(t, s, "membership breaks tag rule");
                if (has_r != fresh.admits(t.m, r) && has_r != fresh.admits(t.n, r))
                    complain(t, s, "group sides with neither m nor n");
            }
        }
        TripleMachine& cached = ctx.machine(t.m, t.n, t.k, stage);
        // The cache only moves forward, so an earlier audit stage cannot be
        // compared against a machine that has already advanced past it.
        if (cached.stage() == stage) {
            if (cached.key_exponent() != fresh.key_exponent() ||
                cached.promoted() != fresh.promoted())
                complain(t, stage, "cached machine disagrees with replay");
            u64 lmax = std::max(t.big_n(), index_bound);
            for (u64 l = 0; l <= lmax; ++l)
                if (cached.tag_nside(l) != fresh.tag_nside(l))
                    complain(t, stage, "cached tag disagrees with replay");
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Naive oracle: literal finite-set transcription, for equivalence testing
// ---------------------------------------------------------------------------

// Explicit finite sets G_{l,s} restricted to negative powers of tracked
// primes; 1 (hence Z) is implicit in every group.  Indices beyond N share one
// uniform power set, since stages treat the whole block l > N alike.
struct NaiveSets {
    struct TripleSets {
        Triple t;
        std::vector<std::set<u64>> negpow;  // per l <= N: exponents e with p^{-e} present
        std::set<u64> tailpow;              // the uniform block l > N
    };
    std::map<u64, TripleSets> triples;  // keyed by triple index
    u64 stage = 0;

    bool contains(u64 l, u64 p, u64 e) const {
        if (e == 0) return true;
        auto it = triples.find(prime_index(p));
        if (it == triples.end()) throw std::domain_error("prime not tracked by naive oracle");
        const TripleSets& ts = it->second;
        const std::set<u64>& s = l <= ts.t.big_n() ? ts.negpow[l] : ts.tailpow;
        return s.count(e) > 0;
    }
};

// Runs the per-stage text directly on explicit sets for every triple whose
// prime is below `prime_bound`: recompute the key exponent by scanning G_m,
// keep the latest qualifying chip per index as the lookback stage, fire on a
// chip c_{m,n} = k or on a recorded partner whose p^{-r} membership differs,
// and copy p^{-(r+1)} along the order.  Entirely independent of the tag/flag
// representation used by TripleMachine.
inline NaiveSets naive_oracle(ChipScheduler& sched, u64 stage_bound, u64 prime_bound) {
    NaiveSets out;
    out.stage = stage_bound;
    if (stage_bound > 0) sched.run_to(stage_bound - 1);
    const auto& log = sched.log();
    for (u64 i = 0; nth_prime(i) < prime_bound; ++i) {
        Triple t = triple_of_index(i);
        u64 N = t.big_n();
        std::vector<u64> order{t.m, t.n};
        for (u64 l = 0; l <= N; ++l)
            if (l != t.m && l != t.n) order.push_back(l);
        std::vector<u64> pos(N + 1, 0);
        for (std::size_t x = 0; x < order.size(); ++x) pos[order[x]] = x;

        NaiveSets::TripleSets ts;
        ts.t = t;
        ts.negpow.assign(N + 1, {});
        ts.negpow[t.n].insert(1);  // stage 0: p^{-1} lies in G_n only

        std::vector<std::optional<std::pair<u64, u64>>> rec(N + 1);  // l -> (j, stage)
        for (u64 s1 = 1; s1 <= stage_bound; ++s1) {
            const Chip& c = log[s1 - 1];
            if (c.value <= N) {
                auto note = [&](u64 j, u64 l) {
                    if (j <= N && l <= N && l != t.m && l != t.n && pos[j] < pos[l])
                        rec[l] = {j, s1 - 1};
                };
                note(c.m, c.n);
                note(c.n, c.m);
            }
            u64 r = 1;
            while (ts.negpow[t.m].count(r)) ++r;
            bool act = c.m == t.m && c.n == t.n && c.value == t.k;
            if (!act) {
                for (std::size_t x = 2; x < order.size() && !act; ++x) {
                    u64 l = order[x];
                    if (rec[l] &&
                        ts.negpow[rec[l]->first].count(r) != ts.negpow[l].count(r))
                        act = true;
                }
            }
            if (act) {
                for (u64 l = 0; l <= N; ++l) ts.negpow[l].insert(r);
                ts.tailpow.insert(r);
                ts.negpow[t.n].insert(r + 1);  // and not G_m
                ts.tailpow.insert(r + 1);      // every l > N
                for (std::size_t x = 2; x < order.size(); ++x) {
                    u64 l = order[x];
                    if (rec[l] && ts.negpow[rec[l]->first].count(r + 1))
                        ts.negpow[l].insert(r + 1);
                }
            }
        }
        out.triples.emplace(i, std::move(ts));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Shipped oracle families
// ---------------------------------------------------------------------------

// All streams identical: every pair equivalent under any reflexive relation.
inline OracleFamily identical_family(u64 count) {
    OracleFamily f;
    for (u64 i = 0; i < count; ++i) f.streams.push_back(BitStream::constant(0));
    return f;
}

// Two streams differing exactly at one position (eventual-agreement witnesses
// start at diff_pos).
inline OracleFamily e0_pair_family(u64 diff_pos) {
    OracleFamily f;
    BitStream z = BitStream::constant(0);
    f.streams = {z, z.with_flipped({diff_pos})};
    return f;
}

// Four eventually periodic streams in two eventual-agreement classes:
// {0, 1} (eventually zero) and {2, 3} (eventually alternating).
inline OracleFamily e0_two_class_family() {
    OracleFamily f;
    BitStream z = BitStream::constant(0);
    BitStream alt = BitStream({}, {0, 1});
    f.streams = {z, z.with_flipped({0}), alt, alt.with_flipped({1})};
    return f;
}

// Eight eventually periodic streams in four eventual-agreement classes:
// {0, 4} eventually zero, {1, 7} eventually of period 001, {2, 6} eventually
// one, {3, 5} alternating.
inline OracleFamily e0_demo_family() {
    OracleFamily f;
    BitStream z = BitStream::constant(0);
    BitStream o = BitStream::constant(1);
    BitStream alt = BitStream({}, {0, 1});
    BitStream p3 = BitStream({}, {0, 0, 1});
    f.streams = {z,
                 p3,
                 o,
                 alt,
                 z.with_flipped({0, 3}),
                 alt.with_flipped({2}),
                 o.with_flipped({5}),
                 p3.with_flipped({1, 4})};
    return f;
}

// The known eventual-agreement partition of e0_demo_family, as a class label
// per index.
inline std::vector<u64> e0_demo_classes() { return {0, 1, 2, 3, 0, 3, 2, 1}; }

}  // namespace wb
