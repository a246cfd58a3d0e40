#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "workbench/diagrams.hpp"
#include "workbench/tfab.hpp"

namespace wb {

// ---------------------------------------------------------------------------
// Five-valued bounded verdicts
// ---------------------------------------------------------------------------

// True and False are sound (never overturned at larger bounds / stages);
// the @bound variants are relative to the declared budgets and may improve.
// The numeric order makes conjunction = min and disjunction = max.
enum class Verdict { False = 0, FalseAtBound = 1, Unknown = 2, TrueAtBound = 3, True = 4 };

inline const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::False: return "false";
        case Verdict::FalseAtBound: return "false@bound";
        case Verdict::Unknown: return "unknown";
        case Verdict::TrueAtBound: return "true@bound";
        default: return "true";
    }
}

inline bool verdict_sound(Verdict v) { return v == Verdict::True || v == Verdict::False; }
inline bool verdict_falsish(Verdict v) { return v == Verdict::False || v == Verdict::FalseAtBound; }
inline bool verdict_truish(Verdict v) { return v == Verdict::True || v == Verdict::TrueAtBound; }

// ---------------------------------------------------------------------------
// Terms and atoms
// ---------------------------------------------------------------------------

// First-order term over a diagram signature: a quantified variable (de Bruijn
// level into the evaluation environment), a fixed element code, or a symbol
// application.  Symbols are referenced by name and resolved against the
// evaluated diagram's signature.
struct Term {
    enum class Kind { Var, Code, App };
    Kind kind = Kind::Code;
    u64 id = 0;  // variable level or element code
    std::string sym;
    std::vector<Term> args;

    static Term var(u64 level) {
        Term t;
        t.kind = Kind::Var;
        t.id = level;
        return t;
    }
    static Term code(u64 c) {
        Term t;
        t.kind = Kind::Code;
        t.id = c;
        return t;
    }
    static Term app(std::string s, std::vector<Term> a) {
        Term t;
        t.kind = Kind::App;
        t.sym = std::move(s);
        t.args = std::move(a);
        return t;
    }

    std::string str() const {
        switch (kind) {
            case Kind::Var: return "v" + std::to_string(id);
            case Kind::Code: return "#" + std::to_string(id);
            default: {
                if (args.empty()) return sym;
                std::string s = sym + "(";
                for (std::size_t i = 0; i < args.size(); ++i) {
                    if (i) s += ",";
                    s += args[i].str();
                }
                return s + ")";
            }
        }
    }
};

// Committed value of a term, or nullopt while some needed fact is unknown.
// Streams commit one canonical code per element, so code equality is element
// equality.
inline std::optional<u64> term_eval(const DiagramStream& d, u64 stage, const std::vector<u64>& env,
                                    const Term& t) {
    switch (t.kind) {
        case Term::Kind::Var:
            if (t.id >= env.size()) throw std::domain_error("unbound variable in term");
            return env[t.id];
        case Term::Kind::Code:
            return d.code_active(t.id, stage) ? std::optional<u64>(t.id) : std::nullopt;
        default: {
            std::vector<u64> codes;
            codes.reserve(t.args.size());
            for (const Term& a : t.args) {
                auto c = term_eval(d, stage, env, a);
                if (!c) return std::nullopt;
                codes.push_back(*c);
            }
            return read_op(d, stage, t.sym, codes);
        }
    }
}

// Possibly negated equation between two terms; `label` is a human-readable
// rendering used in serialized sentences.
struct AtomFormula {
    Term lhs, rhs;
    bool negated = false;
    std::string label;

    std::string str() const {
        if (!label.empty()) return label;
        return lhs.str() + (negated ? " != " : " = ") + rhs.str();
    }
};

inline Verdict atom_verdict(const AtomFormula& a, const DiagramStream& d, u64 stage,
                            const std::vector<u64>& env) {
    auto l = term_eval(d, stage, env, a.lhs);
    if (!l) return Verdict::Unknown;
    auto r = term_eval(d, stage, env, a.rhs);
    if (!r) return Verdict::Unknown;
    bool eq = *l == *r;
    if (a.negated) eq = !eq;
    return eq ? Verdict::True : Verdict::False;
}

// ---------------------------------------------------------------------------
// Infinitary sentences
// ---------------------------------------------------------------------------

class InfSentence;
using SentencePtr = std::shared_ptr<const InfSentence>;

// Monotone child generator: children(b) grows with b; `exhausted` means the
// list is complete (the conjunction/disjunction is finite).
struct GenResult {
    std::vector<SentencePtr> children;
    bool exhausted = false;
};
using ChildGenerator = std::function<GenResult(u64 bound)>;

class InfSentence {
public:
    enum class Kind { Atom, Exists, Forall, And, Or };

    Kind kind;
    AtomFormula atom_;    // Kind::Atom
    u64 vars = 0;         // Exists / Forall
    SentencePtr body;     // Exists / Forall
    ChildGenerator gen;   // And / Or

    static SentencePtr atom(AtomFormula a) {
        auto s = std::make_shared<InfSentence>();
        s->kind = Kind::Atom;
        s->atom_ = std::move(a);
        return s;
    }
    static SentencePtr exists(u64 n, SentencePtr b) { return quantified(Kind::Exists, n, std::move(b)); }
    static SentencePtr forall(u64 n, SentencePtr b) { return quantified(Kind::Forall, n, std::move(b)); }
    static SentencePtr big_and(ChildGenerator g) { return generated(Kind::And, std::move(g)); }
    static SentencePtr big_or(ChildGenerator g) { return generated(Kind::Or, std::move(g)); }
    static SentencePtr conj(std::vector<SentencePtr> cs) { return fixed(Kind::And, std::move(cs)); }
    static SentencePtr disj(std::vector<SentencePtr> cs) { return fixed(Kind::Or, std::move(cs)); }

private:
    static SentencePtr quantified(Kind k, u64 n, SentencePtr b) {
        auto s = std::make_shared<InfSentence>();
        s->kind = k;
        s->vars = n;
        s->body = std::move(b);
        return s;
    }
    static SentencePtr generated(Kind k, ChildGenerator g) {
        auto s = std::make_shared<InfSentence>();
        s->kind = k;
        s->gen = std::move(g);
        return s;
    }
    static SentencePtr fixed(Kind k, std::vector<SentencePtr> cs) {
        return generated(k, [cs = std::move(cs)](u64) { return GenResult{cs, true}; });
    }
};

// ---------------------------------------------------------------------------
// Bounded three-valued evaluation
// ---------------------------------------------------------------------------

namespace detail {

inline Verdict eval_node(const InfSentence& s, const DiagramStream& d, u64 stage, u64 witness_bound,
                         u64 generator_bound, std::vector<u64>& env) {
    using K = InfSentence::Kind;
    switch (s.kind) {
        case K::Atom:
            return atom_verdict(s.atom_, d, stage, env);
        case K::And:
        case K::Or: {
            GenResult g = s.gen(generator_bound);
            bool is_and = s.kind == K::And;
            if (g.children.empty())
                return g.exhausted ? (is_and ? Verdict::True : Verdict::False) : Verdict::Unknown;
            Verdict acc = is_and ? Verdict::True : Verdict::False;
            for (const SentencePtr& c : g.children) {
                Verdict v = eval_node(*c, d, stage, witness_bound, generator_bound, env);
                acc = is_and ? std::min(acc, v) : std::max(acc, v);
                if (acc == (is_and ? Verdict::False : Verdict::True)) break;
            }
            if (!g.exhausted) {
                // unseen children may flip an all-quiet verdict
                if (is_and && acc == Verdict::True) acc = Verdict::TrueAtBound;
                if (!is_and && acc == Verdict::False) acc = Verdict::FalseAtBound;
            }
            return acc;
        }
        case K::Exists:
        case K::Forall: {
            bool is_ex = s.kind == K::Exists;
            u64 lim = std::min<u64>(witness_bound, d.code_bound(stage));
            std::vector<u64> tuple(s.vars, 0);
            std::size_t base = env.size();
            env.resize(base + s.vars, 0);
            bool tried = false;
            Verdict acc = is_ex ? Verdict::False : Verdict::True;
            if (s.vars == 0) {
                acc = eval_node(*s.body, d, stage, witness_bound, generator_bound, env);
                tried = true;
            } else if (lim > 0) {
                while (true) {
                    bool all_active = true;
                    for (u64 c : tuple) all_active = all_active && d.code_active(c, stage);
                    if (all_active) {
                        for (u64 i = 0; i < s.vars; ++i) env[base + i] = tuple[i];
                        Verdict v = eval_node(*s.body, d, stage, witness_bound, generator_bound, env);
                        acc = is_ex ? std::max(acc, v) : std::min(acc, v);
                        tried = true;
                        if (acc == (is_ex ? Verdict::True : Verdict::False)) break;
                    }
                    std::size_t i = 0;
                    for (; i < tuple.size(); ++i) {
                        if (++tuple[i] < lim) break;
                        tuple[i] = 0;
                    }
                    if (i == tuple.size()) break;
                }
            }
            env.resize(base);
            if (!tried) return Verdict::Unknown;
            // the witness space is unbounded: refuting every tried branch of an
            // Exists (or passing every tried code of a Forall) is bound-relative
            if (is_ex && acc == Verdict::False) acc = Verdict::FalseAtBound;
            if (!is_ex && acc == Verdict::True) acc = Verdict::TrueAtBound;
            return acc;
        }
    }
    return Verdict::Unknown;
}

}  // namespace detail

// Kleene-style bounded evaluation.  Exists tries code tuples below
// witness_bound; generators are expanded to generator_bound; True/False are
// sound, the @bound variants are budget-relative.
inline Verdict eval_bounded(const SentencePtr& s, const DiagramStream& d, u64 stage, u64 witness_bound,
                            u64 generator_bound) {
    std::vector<u64> env;
    return detail::eval_node(*s, d, stage, witness_bound, generator_bound, env);
}

// ---------------------------------------------------------------------------
// Structural complexity (Sigma_n / Pi_n shape over a generator probe)
// ---------------------------------------------------------------------------

inline bool is_sigma(const SentencePtr& s, unsigned n, u64 probe = 3);
inline bool is_pi(const SentencePtr& s, unsigned n, u64 probe = 3);

inline bool is_sigma(const SentencePtr& s, unsigned n, u64 probe) {
    using K = InfSentence::Kind;
    if (s->kind == K::Atom) return true;
    if (n == 0) {
        if (s->kind == K::Exists || s->kind == K::Forall) return false;
        GenResult g = s->gen(probe);
        if (!g.exhausted) return false;
        for (const auto& c : g.children)
            if (!is_sigma(c, 0, probe)) return false;
        return true;
    }
    if (is_pi(s, n - 1, probe)) return true;
    switch (s->kind) {
        case K::Exists:
            return is_sigma(s->body, n, probe);
        case K::Or: {
            GenResult g = s->gen(probe);
            for (const auto& c : g.children)
                if (!is_sigma(c, n, probe)) return false;
            return true;  // countable disjunction of Sigma_n is Sigma_n
        }
        case K::And: {
            GenResult g = s->gen(probe);
            if (g.exhausted) {
                for (const auto& c : g.children)
                    if (!is_sigma(c, n, probe)) return false;
                return true;  // finite conjunction of Sigma_n is Sigma_n
            }
            for (const auto& c : g.children)
                if (!is_pi(c, n - 1, probe)) return false;
            return true;  // countable conjunction stays below the Sigma_n quantifier
        }
        default:
            return false;
    }
}

inline bool is_pi(const SentencePtr& s, unsigned n, u64 probe) {
    using K = InfSentence::Kind;
    if (s->kind == K::Atom) return true;
    if (n == 0) return is_sigma(s, 0, probe);
    if (is_sigma(s, n - 1, probe)) return true;
    switch (s->kind) {
        case K::Forall:
            return is_pi(s->body, n, probe);
        case K::And: {
            GenResult g = s->gen(probe);
            for (const auto& c : g.children)
                if (!is_pi(c, n, probe)) return false;
            return true;
        }
        case K::Or: {
            GenResult g = s->gen(probe);
            if (g.exhausted) {
                for (const auto& c : g.children)
                    if (!is_pi(c, n, probe)) return false;
                return true;
            }
            for (const auto& c : g.children)
                if (!is_sigma(c, n - 1, probe)) return false;
            return true;
        }
        default:
            return false;
    }
}

inline bool sigma3_shape(const SentencePtr& s, u64 probe = 3) { return is_sigma(s, 3, probe); }

// ---------------------------------------------------------------------------
// JSON serialization (generator state inlined at a chosen bound)
// ---------------------------------------------------------------------------

inline nlohmann::ordered_json sentence_json(const SentencePtr& s, u64 generator_bound) {
    using K = InfSentence::Kind;
    nlohmann::ordered_json j;
    switch (s->kind) {
        case K::Atom:
            j["kind"] = "atom";
            j["text"] = s->atom_.str();
            break;
        case K::Exists:
        case K::Forall:
            j["kind"] = s->kind == K::Exists ? "exists" : "forall";
            j["vars"] = s->vars;
            j["body"] = sentence_json(s->body, generator_bound);
            break;
        case K::And:
        case K::Or: {
            GenResult g = s->gen(generator_bound);
            j["kind"] = s->kind == K::And ? "and" : "or";
            j["exhausted"] = g.exhausted;
            j["bound"] = generator_bound;
            nlohmann::ordered_json kids = nlohmann::ordered_json::array();
            for (const auto& c : g.children) kids.push_back(sentence_json(c, generator_bound));
            j["children"] = std::move(kids);
            break;
        }
    }
    return j;
}

inline std::string sentence_pretty(const SentencePtr& s, u64 generator_bound) {
    return sentence_json(s, generator_bound).dump(2);
}

// ---------------------------------------------------------------------------
// Group-side term builders
// ---------------------------------------------------------------------------

namespace gterm {

inline Term e() { return Term::app("e", {}); }
inline Term add(Term a, Term b) { return Term::app("+", {std::move(a), std::move(b)}); }
inline Term neg(Term a) { return Term::app("neg", {std::move(a)}); }

// m * t as a term, via repeated addition (m = 0 renders the identity).
inline Term scale(long m, const Term& t) {
    if (m == 0) return e();
    if (m < 0) return neg(scale(-m, t));
    Term acc = t;
    for (long i = 1; i < m; ++i) acc = add(acc, t);
    return acc;
}

// m1 v_off + ... + mr v_{off+r-1}; the all-zero combination renders e.
inline Term lincomb(const std::vector<long>& m, u64 var_offset) {
    Term acc = e();
    bool first = true;
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (m[i] == 0) continue;
        Term t = scale(m[i], Term::var(var_offset + i));
        acc = first ? t : add(acc, t);
        first = false;
    }
    return acc;
}

inline std::string lincomb_label(const std::vector<long>& m, const std::string& var) {
    std::string s;
    bool first = true;
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (m[i] == 0) continue;
        if (!first) s += " + ";
        s += std::to_string(m[i]) + var + std::to_string(i);
        first = false;
    }
    return first ? "0" : s;
}

}  // namespace gterm

// ---------------------------------------------------------------------------
// Scott sentences for torsion-free abelian groups of finite rank
// ---------------------------------------------------------------------------

struct invalid_basis_error : std::domain_error {
    using std::domain_error::domain_error;
};

// Q-linear expression lambda(x) = (m1 x1 + ... + mr xr) / m, written with the
// quantifier-free clause  m y = m1 x1 + ... + mr xr.
struct LinearExpr {
    long m = 1;
    std::vector<long> num;

    std::string str() const {
        return std::to_string(m) + "y = " + gterm::lincomb_label(num, "x");
    }
};

// Nonzero integer tuples of height <= h in increasing height order, each
// divided by its gcd (a scaled clause names the same linear expression).
inline std::vector<std::vector<long>> integer_tuples(std::size_t r, long h, bool primitive) {
    std::vector<std::vector<long>> out;
    for (long hh = 1; hh <= h; ++hh) {
        std::vector<long> m(r, -hh);
        while (true) {
            long top = 0;
            u64 g = 0;
            for (long v : m) {
                top = std::max(top, std::labs(v));
                g = std::gcd(g, static_cast<u64>(std::labs(v)));
            }
            if (top == hh && (!primitive || g == 1)) out.push_back(m);
            std::size_t i = 0;
            for (; i < m.size(); ++i) {
                if (m[i] < hh) {
                    ++m[i];
                    break;
                }
                m[i] = -hh;
            }
            if (i == m.size()) break;
        }
    }
    return out;
}

// The set S of the group Scott sentence: lambda = (m, m1..mr) with m >= 1,
// gcd(m, m1..mr) = 1, confirmed present in G at stage `bound` by a committed
// witness y with m y = m1 a1 + ... + mr ar.  Monotone in `bound`.
inline std::vector<LinearExpr> group_present_exprs(const DiagramStream& g, const std::vector<u64>& basis,
                                                   u64 bound, u64 scan_cap = 64) {
    std::vector<LinearExpr> out;
    u64 lim = std::min<u64>(g.code_bound(bound), scan_cap);
    std::vector<u64> env;
    // The bound doubles as the reading stage.  Heights are tied to the
    // visible code window so that presence clauses and the realized-values
    // window stay aligned (ranks >= 2 get a smaller cap: tuple space is
    // exponential in the rank).
    long h = static_cast<long>(basis.size() == 1 ? lim : std::min<u64>(lim, 8));
    // committed right-hand sides m1 a1 + ... + mr ar, keyed by code
    std::map<u64, std::vector<std::vector<long>>> rhs_by_code;
    auto e_code = read_op(g, bound, "e", {});
    for (std::vector<long>& num : integer_tuples(basis.size(), h, false)) {
        Term rhs = gterm::e();
        bool first = true;
        for (std::size_t i = 0; i < num.size(); ++i) {
            if (num[i] == 0) continue;
            Term t = gterm::scale(num[i], Term::code(basis[i]));
            rhs = first ? t : gterm::add(rhs, t);
            first = false;
        }
        auto rhs_code = term_eval(g, bound, env, rhs);
        if (rhs_code) rhs_by_code[*rhs_code].push_back(num);
    }
    if (e_code) out.push_back(LinearExpr{1, std::vector<long>(basis.size(), 0)});
    // committed multiples m y for every visible y, matched against the table
    for (u64 y = 0; y < lim; ++y) {
        if (!g.code_active(y, bound)) continue;
        std::optional<u64> cur = y;
        for (long m = 1; m <= h && cur; ++m) {
            auto it = rhs_by_code.find(*cur);
            if (it != rhs_by_code.end()) {
                for (const auto& num : it->second) {
                    u64 gg = static_cast<u64>(m);
                    for (long v : num) gg = std::gcd(gg, static_cast<u64>(std::labs(v)));
                    if (gg == 1) out.push_back(LinearExpr{m, num});
                }
            }
            cur = read_op(g, bound, 1, {*cur, y});
        }
    }
    std::sort(out.begin(), out.end(), [](const LinearExpr& p, const LinearExpr& q) {
        return std::tie(p.m, p.num) < std::tie(q.m, q.num);
    });
    out.erase(std::unique(out.begin(), out.end(),
                          [](const LinearExpr& p, const LinearExpr& q) {
                              return p.m == q.m && p.num == q.num;
                          }),
              out.end());
    return out;
}

// Pi_1 axioms of torsion-free abelian groups: finitely many universal group
// laws plus the countable torsion-freeness scheme  n x = e -> x = e.
inline SentencePtr tfab_axioms() {
    using namespace gterm;
    Term x = Term::var(0), y = Term::var(1), z = Term::var(2);
    auto eq = [](Term a, Term b, std::string label) {
        return InfSentence::atom(AtomFormula{std::move(a), std::move(b), false, std::move(label)});
    };
    SentencePtr laws = InfSentence::conj({
        InfSentence::forall(2, eq(add(x, y), add(y, x), "x + y = y + x")),
        InfSentence::forall(3, eq(add(add(x, y), z), add(x, add(y, z)), "(x + y) + z = x + (y + z)")),
        InfSentence::forall(1, eq(add(x, e()), x, "x + e = x")),
        InfSentence::forall(1, eq(add(x, neg(x)), e(), "x + -x = e")),
    });
    SentencePtr torsion_free = InfSentence::big_and([](u64 b) {
        GenResult g;
        for (u64 n = 2; n <= std::min<u64>(b, 8) + 1; ++n) {
            Term x = Term::var(0);
            g.children.push_back(InfSentence::forall(
                1, InfSentence::disj(
                       {InfSentence::atom(AtomFormula{scale(static_cast<long>(n), x), e(), true,
                                                      std::to_string(n) + "x != e"}),
                        InfSentence::atom(AtomFormula{x, e(), false, "x = e"})})));
        }
        return g;
    });
    return InfSentence::conj({laws, torsion_free});
}

// Sigma_3 Scott sentence of a torsion-free abelian group presented by its
// diagram and an independent basis tuple: the Pi_1 axioms, and a tuple x that
// is independent (Pi_1) and realizes exactly the linear expressions present
// over the basis (Pi_2).
inline SentencePtr scott_tfab(StreamPtr g, std::vector<u64> basis, u64 check_stage = 24,
                              u64 check_coeff_bound = 2, u64 scan_cap = 64) {
    if (!(g->sig() == group_signature())) throw std::domain_error("scott_tfab expects a GROUP stream");
    if (basis.empty()) throw invalid_basis_error("empty basis");
    for (u64 a : basis)
        if (!g->code_active(a, check_stage)) throw invalid_basis_error("basis code not active");
    auto refuted = independence_check(*g, basis, check_stage, check_coeff_bound);
    if (refuted.dependent) throw invalid_basis_error("basis dependence committed");

    std::size_t r = basis.size();
    // memoized S enumeration, shared by the three generated nodes
    auto cache = std::make_shared<std::map<u64, std::vector<LinearExpr>>>();
    auto present = [g, basis, cache, scan_cap](u64 b) -> const std::vector<LinearExpr>& {
        auto it = cache->find(b);
        if (it == cache->end())
            it = cache->emplace(b, group_present_exprs(*g, basis, b, scan_cap)).first;
        return it->second;
    };

    auto clause = [r](const LinearExpr& lam, u64 y_level) {
        Term lhs = gterm::scale(lam.m, Term::var(y_level));
        Term rhs = gterm::lincomb(lam.num, 0);
        (void)r;
        return InfSentence::atom(AtomFormula{std::move(lhs), std::move(rhs), false, lam.str()});
    };

    SentencePtr independence = InfSentence::big_and([r](u64 b) {
        GenResult out;
        for (const auto& m : integer_tuples(r, static_cast<long>(std::min<u64>(b, 8) + 1), true))
            out.children.push_back(InfSentence::atom(
                AtomFormula{gterm::lincomb(m, 0), gterm::e(), true, gterm::lincomb_label(m, "x") + " != e"}));
        return out;
    });
    SentencePtr all_present = InfSentence::big_and([present, clause, r](u64 b) {
        GenResult out;
        for (const LinearExpr& lam : present(b))
            out.children.push_back(InfSentence::exists(1, clause(lam, r)));
        return out;
    });
    SentencePtr only_present = InfSentence::forall(1, InfSentence::big_or([present, clause, r](u64 b) {
        GenResult out;
        for (const LinearExpr& lam : present(b)) out.children.push_back(clause(lam, r));
        return out;
    }));

    return InfSentence::conj(
        {tfab_axioms(),
         InfSentence::exists(r, InfSentence::conj({independence, all_present, only_present}))});
}

// ---------------------------------------------------------------------------
// Field-side term builders
// ---------------------------------------------------------------------------

namespace fterm {

inline Term zero() { return Term::app("0", {}); }
inline Term one() { return Term::app("1", {}); }
inline Term add(Term a, Term b) { return Term::app("+", {std::move(a), std::move(b)}); }
inline Term sub(Term a, Term b) { return Term::app("-", {std::move(a), std::move(b)}); }
inline Term mul(Term a, Term b) { return Term::app("*", {std::move(a), std::move(b)}); }

inline Term int_const(long n) {
    if (n == 0) return zero();
    if (n < 0) return sub(zero(), int_const(-n));
    Term acc = one();
    for (long i = 1; i < n; ++i) acc = add(acc, one());
    return acc;
}

inline Term pow(const Term& t, u64 k) {
    if (k == 0) return one();
    Term acc = t;
    for (u64 i = 1; i < k; ++i) acc = mul(acc, t);
    return acc;
}

// c0 + c1 t + ... + cd t^d (Horner form keeps the committed-op chains short)
inline Term poly(const std::vector<long>& c, const Term& t) {
    if (c.empty()) return zero();
    Term acc = int_const(c.back());
    for (std::size_t i = c.size(); i-- > 1;) acc = add(mul(acc, t), int_const(c[i - 1]));
    return acc;
}

inline std::string poly_label(const std::vector<long>& c, const std::string& var) {
    std::string s;
    bool first = true;
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (c[i] == 0) continue;
        if (!first) s += " + ";
        s += std::to_string(c[i]);
        if (i >= 1) s += var + (i > 1 ? "^" + std::to_string(i) : "");
        first = false;
    }
    return first ? "0" : s;
}

}  // namespace fterm

// ---------------------------------------------------------------------------
// Scott sentences for fields of finite transcendence degree
// ---------------------------------------------------------------------------

// One member of the field sentence's S: the quantifier-free clause
//   a(x1) * y^d = b(x1)
// with a a nonzero integer polynomial.  For r = 0 both sides are integer
// constants.  The height-ordered family (d <= 3, deg <= 3, |coeff| <= height)
// covers radical clauses y^d = x1 and rational clauses y * a(x1) = b(x1).
struct FieldClause {
    u64 d = 1;
    std::vector<long> a, b;  // coefficients in the first basis variable

    std::string str() const {
        return "(" + fterm::poly_label(a, "x") + ")y^" + std::to_string(d) + " = " +
               fterm::poly_label(b, "x");
    }
};

inline std::vector<std::vector<long>> field_poly_pool(u64 height, std::size_t max_deg) {
    std::vector<std::vector<long>> out;
    long h = static_cast<long>(std::min<u64>(height, 2));
    for (std::size_t deg = 0; deg <= max_deg; ++deg) {
        std::vector<long> c(deg + 1, -h);
        while (true) {
            if (c.back() != 0) out.push_back(c);
            std::size_t i = 0;
            for (; i < c.size(); ++i) {
                if (c[i] < h) {
                    ++c[i];
                    break;
                }
                c[i] = -h;
            }
            if (i == c.size()) break;
        }
    }
    return out;
}

inline Term field_clause_lhs(const FieldClause& cl, u64 y_level, const std::optional<Term>& x) {
    Term a = x ? fterm::poly(cl.a, *x) : fterm::int_const(cl.a.empty() ? 0 : cl.a[0]);
    return fterm::mul(a, fterm::pow(Term::var(y_level), cl.d));
}
inline Term field_clause_rhs(const FieldClause& cl, const std::optional<Term>& x) {
    return x ? fterm::poly(cl.b, *x) : fterm::int_const(cl.b.empty() ? 0 : cl.b[0]);
}

// The S of the field Scott sentence: clauses confirmed at stage `bound` by a
// committed witness y in F with a(a1) y^d = b(a1).  The left factors are
// monic monomials in x1 (integer constants up to the bound when r = 0); the
// right sides range over the height-1 polynomial pool (constants up to the
// bound when r = 0).  Monotone in `bound` as a set of clauses; the returned
// list is in canonical (d, a, b) order.
inline std::vector<FieldClause> field_present_clauses(const DiagramStream& f, const std::vector<u64>& basis,
                                                      u64 bound, u64 scan_cap = 48) {
    std::vector<FieldClause> out;
    u64 lim = std::min<u64>(f.code_bound(bound), scan_cap);
    std::vector<u64> env;
    bool has_x = !basis.empty();
    std::optional<Term> x;
    if (has_x) x = Term::code(basis[0]);
    u64 max_d = std::min<u64>(3, std::max<u64>(1, bound));

    auto eval_side = [&](const std::vector<long>& c) {
        return term_eval(f, bound, env, has_x ? fterm::poly(c, *x) : fterm::int_const(c.empty() ? 0 : c[0]));
    };
    std::vector<std::vector<long>> bpool;
    if (has_x) {
        bpool = field_poly_pool(1, 3);
        bpool.push_back({0});  // zero right-hand side covers y = 0
    } else {
        long h = static_cast<long>(std::min<u64>(bound, 12));
        for (long c = -h; c <= h; ++c) bpool.push_back({c});
    }
    std::map<u64, std::vector<std::size_t>> rhs_by_code;
    for (std::size_t i = 0; i < bpool.size(); ++i) {
        auto c = eval_side(bpool[i]);
        if (c) rhs_by_code[*c].push_back(i);
    }
    std::vector<std::vector<long>> apool;
    if (has_x) {
        apool = {{1}, {0, 1}, {0, 0, 1}};
    } else {
        long h = static_cast<long>(std::min<u64>(std::max<u64>(bound, 1), 12));
        for (long c = 1; c <= h; ++c) apool.push_back({c});
    }
    std::set<std::tuple<u64, std::size_t, std::size_t>> seen;
    for (u64 d = 1; d <= max_d; ++d) {
        for (std::size_t ia = 0; ia < apool.size(); ++ia) {
            auto ac = eval_side(apool[ia]);
            if (!ac) continue;
            for (u64 y = 0; y < lim; ++y) {
                if (!f.code_active(y, bound)) continue;
                auto yd = term_eval(f, bound, env, fterm::pow(Term::code(y), d));
                if (!yd) continue;
                auto lhs = read_op(f, bound, "*", {*ac, *yd});
                if (!lhs) continue;
                auto it = rhs_by_code.find(*lhs);
                if (it == rhs_by_code.end()) continue;
                for (std::size_t ib : it->second)
                    if (seen.emplace(d, ia, ib).second) out.push_back(FieldClause{d, apool[ia], bpool[ib]});
            }
        }
    }
    std::sort(out.begin(), out.end(), [](const FieldClause& p, const FieldClause& q) {
        return std::tie(p.d, p.a, p.b) < std::tie(q.d, q.a, q.b);
    });
    return out;
}

// Pi_2 axioms of fields of characteristic 0 (the multiplicative-inverse law
// and the countable characteristic scheme are the non-Pi_1 and infinitary
// parts; everything sits inside Sigma_3).
inline SentencePtr field_axioms() {
    using namespace fterm;
    Term x = Term::var(0), y = Term::var(1), z = Term::var(2);
    auto eq = [](Term a, Term b, std::string label) {
        return InfSentence::atom(AtomFormula{std::move(a), std::move(b), false, std::move(label)});
    };
    SentencePtr laws = InfSentence::conj({
        InfSentence::forall(2, eq(add(x, y), add(y, x), "x + y = y + x")),
        InfSentence::forall(2, eq(mul(x, y), mul(y, x), "x * y = y * x")),
        InfSentence::forall(3, eq(add(add(x, y), z), add(x, add(y, z)), "(x + y) + z = x + (y + z)")),
        InfSentence::forall(3, eq(mul(mul(x, y), z), mul(x, mul(y, z)), "(x * y) * z = x * (y * z)")),
        InfSentence::forall(3, eq(mul(x, add(y, z)), add(mul(x, y), mul(x, z)),
                                  "x * (y + z) = x * y + x * z")),
        InfSentence::forall(1, eq(add(x, zero()), x, "x + 0 = x")),
        InfSentence::forall(1, eq(mul(x, one()), x, "x * 1 = x")),
        InfSentence::forall(2, eq(add(sub(x, y), y), x, "(x - y) + y = x")),
    });
    SentencePtr inverses = InfSentence::forall(
        1, InfSentence::disj(
               {InfSentence::atom(AtomFormula{x, zero(), false, "x = 0"}),
                InfSentence::exists(1, InfSentence::atom(AtomFormula{mul(Term::var(0), Term::var(1)),
                                                                    one(), false, "x * y = 1"}))}));
    SentencePtr char0 = InfSentence::big_and([](u64 b) {
        GenResult g;
        for (u64 n = 1; n <= std::min<u64>(b, 8) + 1; ++n)
            g.children.push_back(InfSentence::atom(AtomFormula{
                fterm::int_const(static_cast<long>(n)), fterm::zero(), true, std::to_string(n) + " != 0"}));
        return g;
    });
    return InfSentence::conj({laws, inverses, char0});
}

// Bounded refutation of algebraic independence of a basis code: a committed
// zero of a nonzero integer polynomial in one basis element.
inline bool field_dependence_refuted(const DiagramStream& f, const std::vector<u64>& basis, u64 stage) {
    std::vector<u64> env;
    auto zero_code = read_op(f, stage, "0", {});
    if (!zero_code) return false;
    for (u64 a : basis) {
        for (const auto& q : field_poly_pool(2, 2)) {
            auto v = term_eval(f, stage, env, fterm::poly(q, Term::code(a)));
            if (v && *v == *zero_code) return true;
        }
    }
    return false;
}

// Sigma_3 Scott sentence of a field of characteristic 0 and transcendence
// degree r, presented by its diagram and a transcendence basis: the axioms,
// and a tuple x that is algebraically independent (Pi_1) and realizes exactly
// the committed existential clauses of the basis (Pi_2).  The clause family
// is height-ordered; an empty basis degenerates to the Pi_2 description.
inline SentencePtr scott_fd(StreamPtr f, std::vector<u64> basis, u64 check_stage = 24,
                            u64 scan_cap = 48) {
    if (!(f->sig() == field_signature())) throw std::domain_error("scott_fd expects a FIELD stream");
    for (u64 a : basis)
        if (!f->code_active(a, check_stage)) throw invalid_basis_error("basis code not active");
    if (field_dependence_refuted(*f, basis, check_stage))
        throw invalid_basis_error("algebraic dependence committed");

    std::size_t r = basis.size();
    auto cache = std::make_shared<std::map<u64, std::vector<FieldClause>>>();
    auto present = [f, basis, cache, scan_cap](u64 b) -> const std::vector<FieldClause>& {
        auto it = cache->find(b);
        if (it == cache->end())
            it = cache->emplace(b, field_present_clauses(*f, basis, b, scan_cap)).first;
        return it->second;
    };

    auto clause = [r](const FieldClause& cl, u64 y_level) {
        std::optional<Term> x;
        if (r > 0) x = Term::var(0);
        return InfSentence::atom(
            AtomFormula{field_clause_lhs(cl, y_level, x), field_clause_rhs(cl, x), false, cl.str()});
    };

    SentencePtr independence = InfSentence::big_and([r](u64 b) {
        GenResult out;
        out.exhausted = r == 0;
        for (std::size_t i = 0; i < r; ++i)
            for (const auto& q : field_poly_pool(std::min<u64>(b, 2), 2)) {
                if (q.size() == 1) continue;  // nonzero constants are vacuously nonzero
                out.children.push_back(InfSentence::atom(AtomFormula{
                    fterm::poly(q, Term::var(i)), fterm::zero(), true,
                    fterm::poly_label(q, "x" + std::to_string(i)) + " != 0"}));
            }
        return out;
    });
    SentencePtr all_present = InfSentence::big_and([present, clause, r](u64 b) {
        GenResult out;
        for (const FieldClause& cl : present(b))
            out.children.push_back(InfSentence::exists(1, clause(cl, r)));
        return out;
    });
    SentencePtr only_present = InfSentence::forall(1, InfSentence::big_or([present, clause, r](u64 b) {
        GenResult out;
        for (const FieldClause& cl : present(b)) out.children.push_back(clause(cl, r));
        return out;
    }));

    return InfSentence::conj(
        {field_axioms(),
         InfSentence::exists(r, InfSentence::conj({independence, all_present, only_present}))});
}

}  // namespace wb
