#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "workbench/diagrams.hpp"
#include "workbench/rational.hpp"
#include "workbench/ratfunc.hpp"
#include "workbench/series.hpp"

namespace wb {

// ---------------------------------------------------------------------------
// t-adic valuation
// ---------------------------------------------------------------------------

struct TAdicValue {
    bool infinite = true;
    long v = 0;

    static TAdicValue infinity() { return TAdicValue{}; }
    static TAdicValue finite(long n) { return TAdicValue{false, n}; }
    friend bool operator==(const TAdicValue& a, const TAdicValue& b) {
        return a.infinite == b.infinite && (a.infinite || a.v == b.v);
    }
    std::string str() const { return infinite ? "inf" : std::to_string(v); }
};

template <class K>
TAdicValue t_adic(const RatFunc<K>& r) {
    if (r.is_zero()) return TAdicValue::infinity();
    return TAdicValue::finite(v_t(r));
}

// ---------------------------------------------------------------------------
// Laurent windows
// ---------------------------------------------------------------------------

// Exactly known coefficients of a Laurent series for exponents lo..hi.
// Coefficients below lo are zero; nothing is claimed beyond hi.
template <class K>
class Laurent {
public:
    Laurent() : lo_(0) {}
    Laurent(long lo, std::vector<K> c) : lo_(lo), c_(std::move(c)) {}
    static Laurent zero_window(long hi) { return Laurent(0, std::vector<K>(hi + 1, K{}.zero_like())); }

    long lo() const { return lo_; }
    long hi() const { return lo_ + static_cast<long>(c_.size()) - 1; }
    K coeff(long e) const {
        if (e < lo_) return K{}.zero_like();
        if (e > hi()) throw std::domain_error("coefficient beyond Laurent window");
        return c_[static_cast<std::size_t>(e - lo_)];
    }
    // First exponent with a nonzero coefficient, if visible in the window.
    std::optional<long> order() const {
        for (long e = lo_; e <= hi(); ++e)
            if (!coeff(e).is_zero()) return e;
        return std::nullopt;
    }
    Laurent truncated(long new_hi) const {
        if (new_hi >= hi()) return *this;
        std::vector<K> c(c_.begin(), c_.begin() + static_cast<std::size_t>(new_hi - lo_ + 1));
        return Laurent(lo_, std::move(c));
    }
    Laurent shifted(long m) const { return Laurent(lo_ + m, c_); }

    friend Laurent operator+(const Laurent& a, const Laurent& b) {
        long lo = std::min(a.lo_, b.lo_);
        long hi = std::min(a.hi(), b.hi());
        if (hi < lo) throw std::domain_error("empty Laurent window in addition");
        std::vector<K> c;
        for (long e = lo; e <= hi; ++e) c.push_back(a.coeff(e) + b.coeff(e));
        return Laurent(lo, std::move(c));
    }
    Laurent operator-() const {
        std::vector<K> c = c_;
        for (auto& k : c) k = -k;
        return Laurent(lo_, std::move(c));
    }
    friend Laurent operator-(const Laurent& a, const Laurent& b) { return a + (-b); }
    friend Laurent operator*(const Laurent& a, const Laurent& b) {
        long lo = a.lo_ + b.lo_;
        long hi = std::min(a.lo_ + b.hi(), b.lo_ + a.hi());
        if (hi < lo) throw std::domain_error("empty Laurent window in product");
        std::vector<K> c(static_cast<std::size_t>(hi - lo + 1), K{}.zero_like());
        for (long i = a.lo_; i <= a.hi(); ++i)
            for (long j = b.lo_; i + j <= hi && j <= b.hi(); ++j)
                c[static_cast<std::size_t>(i + j - lo)] = c[static_cast<std::size_t>(i + j - lo)] + a.coeff(i) * b.coeff(j);
        return Laurent(lo, std::move(c));
    }
    // Inverse; the order must be visible in the window.
    Laurent inverse() const {
        auto o = order();
        if (!o) throw std::domain_error("Laurent inverse: order not visible");
        std::size_t p = static_cast<std::size_t>(hi() - *o);
        std::vector<K> u;
        for (long e = *o; e <= hi(); ++e) u.push_back(coeff(e));
        TruncSeries<K> ui = TruncSeries<K>(std::move(u), p).inv();
        return Laurent(-*o, ui.coeffs());
    }

    std::string str() const {
        std::string out;
        for (long e = lo_; e <= hi(); ++e) {
            if (coeff(e).is_zero()) continue;
            if (!out.empty()) out += " + ";
            if (e == 0) out += coeff(e).str();
            else {
                out += coeff(e).str() + "*t";
                if (e != 1) out += "^" + std::to_string(e);
            }
        }
        if (out.empty()) out = "0";
        return out + " + O(t^" + std::to_string(hi() + 1) + ")";
    }

private:
    long lo_;
    std::vector<K> c_;
};

// ---------------------------------------------------------------------------
// Series expansion of regular rational functions and Newton lifting
// ---------------------------------------------------------------------------

struct normalization_error : std::domain_error {
    using std::domain_error::domain_error;
};
struct no_simple_root_error : std::domain_error {
    using std::domain_error::domain_error;
};

template <class K>
Laurent<K> ratfunc_laurent(const RatFunc<K>& r, long hi) {
    if (r.is_zero()) return Laurent<K>::zero_window(std::max<long>(hi, 0));
    long on = poly_t_order(r.num());
    long od = poly_t_order(r.den());
    long lo = on - od;
    long p = std::max<long>(hi - lo, 0);
    auto unit_series = [p](const Poly<K>& poly, long shift) {
        std::vector<K> c;
        for (long i = shift; i <= shift + p; ++i)
            c.push_back(i <= poly.degree() ? poly.coeffs()[static_cast<std::size_t>(i)] : K{}.zero_like());
        return TruncSeries<K>(std::move(c), static_cast<std::size_t>(p));
    };
    TruncSeries<K> s = unit_series(r.num(), on) * unit_series(r.den(), od).inv();
    return Laurent<K>(lo, s.coeffs());
}

// Residue of a valuation->=0 rational function at t = 0.
template <class K>
K ratfunc_residue(const RatFunc<K>& r) {
    if (r.is_zero()) return K{}.zero_like();
    if (v_t(r) < 0) throw std::domain_error("negative valuation has no residue");
    K n = r.num().is_zero() ? K{}.zero_like() : r.num().coeffs()[0];
    K d = r.den().coeffs()[0];
    return n * d.inv();
}

// Residue polynomial of a monic integral polynomial over F(t).
template <class K>
Poly<K> residue_poly(const Poly<RatFunc<K>>& f) {
    std::vector<K> c;
    for (const auto& r : f.coeffs()) {
        if (!r.is_zero() && v_t(r) < 0)
            throw normalization_error("coefficient with negative valuation");
        c.push_back(ratfunc_residue(r));
    }
    return Poly<K>(std::move(c));
}

// The unique Newton lift: s = a mod t with f(s) = 0 mod t^{precision+1}.
template <class K>
TruncSeries<K> hensel_lift(const Poly<RatFunc<K>>& f, const K& a, std::size_t precision) {
    if (f.is_zero() || f.degree() < 1 || !(f.leading() == f.leading().one_like()))
        throw normalization_error("monic polynomial of positive degree required");
    Poly<K> fbar = residue_poly(f);
    if (!fbar.eval(a).is_zero()) throw no_simple_root_error("not a residue root");
    if (fbar.derivative().eval(a).is_zero()) throw no_simple_root_error("residue root is not simple");

    long hi = static_cast<long>(precision);
    std::vector<Laurent<K>> fc, dc;
    for (const auto& r : f.coeffs()) fc.push_back(ratfunc_laurent(r, hi));
    Poly<RatFunc<K>> fp = f.derivative();
    for (const auto& r : fp.coeffs()) dc.push_back(ratfunc_laurent(r, hi));
    auto eval = [hi](const std::vector<Laurent<K>>& cs, const Laurent<K>& x) {
        Laurent<K> acc = Laurent<K>::zero_window(hi);
        for (std::size_t i = cs.size(); i-- > 0;) acc = (acc * x + cs[i]).truncated(hi);
        return acc;
    };
    std::vector<K> start(precision + 1, K{}.zero_like());
    start[0] = a;
    Laurent<K> s(0, std::move(start));
    for (std::size_t it = 0; it <= precision + 2; ++it) {
        Laurent<K> fx = eval(fc, s);
        if (!fx.order()) return TruncSeries<K>(
            [&] { std::vector<K> c; for (long e = 0; e <= hi; ++e) c.push_back(s.coeff(e)); return c; }(),
            precision);
        s = (s - fx * eval(dc, s).inverse()).truncated(hi);
    }
    throw std::logic_error("Newton iteration failed to converge");
}

// ---------------------------------------------------------------------------
// Integral polynomial arithmetic over F(t)
// ---------------------------------------------------------------------------
//
// Naive Euclidean gcd / resultant chains over F(t)-coefficient polynomials
// suffer severe intermediate fraction blowup.  The helpers below clear
// denominators and work with F[t]-coefficient vectors: primitive
// pseudo-remainder sequences for gcds and fraction-free (Bareiss) Sylvester
// determinants for resultants.

// Gcd in F[t] (coefficients of our polynomials-in-Y), monic.
template <class K>
Poly<K> tpoly_gcd(Poly<K> a, Poly<K> b) {
    return poly_gcd(std::move(a), std::move(b));
}

// f as (integral coefficient vector, common denominator): f_i = num_i / den.
template <class K>
std::pair<std::vector<Poly<K>>, Poly<K>> rf_clear_denominators(const Poly<RatFunc<K>>& f) {
    Poly<K> den = Poly<K>::constant(K{}.one_like());
    for (const auto& c : f.coeffs()) {
        if (c.is_zero()) continue;
        Poly<K> g = tpoly_gcd(den, c.den());
        den = den * Poly<K>::divmod(c.den(), g).first;
    }
    std::vector<Poly<K>> num;
    for (const auto& c : f.coeffs()) {
        if (c.is_zero()) {
            num.push_back(Poly<K>());
        } else {
            num.push_back(c.num() * Poly<K>::divmod(den, c.den()).first);
        }
    }
    return {std::move(num), std::move(den)};
}

template <class K>
void tvec_trim(std::vector<Poly<K>>& v) {
    while (!v.empty() && v.back().is_zero()) v.pop_back();
}

template <class K>
Poly<K> tvec_content(const std::vector<Poly<K>>& v) {
    Poly<K> c;
    for (const auto& p : v) {
        if (p.is_zero()) continue;
        c = c.is_zero() ? p.monic() : tpoly_gcd(c, p);
        if (c.degree() == 0) break;
    }
    return c;
}

template <class K>
void tvec_make_primitive(std::vector<Poly<K>>& v) {
    Poly<K> c = tvec_content(v);
    if (c.degree() < 1) return;
    for (auto& p : v)
        if (!p.is_zero()) p = Poly<K>::divmod(p, c).first;
}

// Pseudo-remainder of integral polynomials (coefficients in F[t]).
template <class K>
std::vector<Poly<K>> tvec_prem(std::vector<Poly<K>> a, const std::vector<Poly<K>>& b) {
    long da = static_cast<long>(a.size()) - 1, db = static_cast<long>(b.size()) - 1;
    const Poly<K>& lb = b.back();
    for (long k = 0; k <= da - db; ++k) {
        for (auto& p : a)
            if (!p.is_zero()) p = p * lb;
        // eliminate the current leading term
        tvec_trim(a);
        long cur = static_cast<long>(a.size()) - 1;
        if (cur < db) break;
        Poly<K> f = Poly<K>::divmod(a.back(), lb).first;
        for (long i = 0; i <= db; ++i) {
            std::size_t idx = static_cast<std::size_t>(cur - db + i);
            a[idx] = a[idx] - f * b[static_cast<std::size_t>(i)];
        }
        tvec_trim(a);
        if (static_cast<long>(a.size()) - 1 < db) break;
    }
    return a;
}

// Gcd of polynomials over F(t), via a primitive pseudo-remainder sequence on
// the cleared-denominator forms.  Result is monic over F(t).
template <class K>
Poly<RatFunc<K>> rf_poly_gcd(const Poly<RatFunc<K>>& a, const Poly<RatFunc<K>>& b) {
    if (a.is_zero()) return b.monic();
    if (b.is_zero()) return a.monic();
    auto A = rf_clear_denominators(a).first;
    auto B = rf_clear_denominators(b).first;
    tvec_trim(A);
    tvec_trim(B);
    if (A.size() < B.size()) std::swap(A, B);
    tvec_make_primitive(A);
    tvec_make_primitive(B);
    while (true) {
        if (B.size() <= 1) {
            // constant (in Y) gcd: the polynomials are coprime
            if (!B.empty()) return Poly<RatFunc<K>>::constant(RatFunc<K>::constant(K{}.one_like()));
            break;
        }
        auto R = tvec_prem(A, B);
        tvec_trim(R);
        if (R.empty()) break;
        tvec_make_primitive(R);
        A = std::move(B);
        B = std::move(R);
    }
    std::vector<RatFunc<K>> c;
    for (const auto& p : B.empty() ? A : B) c.push_back(RatFunc<K>(p));
    return Poly<RatFunc<K>>(std::move(c)).monic();
}

// Squarefree part over F(t) using the integral gcd.
template <class K>
Poly<RatFunc<K>> rf_squarefree(const Poly<RatFunc<K>>& f) {
    if (f.degree() < 1) return f.monic();
    Poly<RatFunc<K>> d = f.derivative();
    if (d.is_zero()) return f.monic();
    Poly<RatFunc<K>> g = rf_poly_gcd(f, d);
    if (g.degree() < 1) return f.monic();
    return Poly<RatFunc<K>>::divmod(f, g).first.monic();
}

// Resultant of integral polynomials (coefficient vectors over F[t]) by
// fraction-free elimination of the Sylvester matrix.
template <class K>
Poly<K> tvec_resultant(std::vector<Poly<K>> A, std::vector<Poly<K>> B) {
    tvec_trim(A);
    tvec_trim(B);
    if (A.empty() || B.empty()) throw std::domain_error("resultant of zero polynomial");
    long m = static_cast<long>(A.size()) - 1, n = static_cast<long>(B.size()) - 1;
    Poly<K> one = Poly<K>::constant(K{}.one_like());
    if (m == 0 || n == 0) {
        Poly<K> base = n == 0 ? B[0] : A[0];
        long e = n == 0 ? m : n;
        Poly<K> acc = one;
        for (long i = 0; i < e; ++i) acc = acc * base;
        return acc;
    }
    long N = m + n;
    std::vector<std::vector<Poly<K>>> M(static_cast<std::size_t>(N),
                                        std::vector<Poly<K>>(static_cast<std::size_t>(N)));
    for (long i = 0; i < n; ++i)
        for (long k = 0; k <= m; ++k)
            M[static_cast<std::size_t>(i)][static_cast<std::size_t>(i + k)] =
                A[static_cast<std::size_t>(m - k)];
    for (long i = 0; i < m; ++i)
        for (long k = 0; k <= n; ++k)
            M[static_cast<std::size_t>(n + i)][static_cast<std::size_t>(i + k)] =
                B[static_cast<std::size_t>(n - k)];
    Poly<K> prev = one;
    bool negate = false;
    for (long k = 0; k + 1 < N; ++k) {
        std::size_t ku = static_cast<std::size_t>(k);
        if (M[ku][ku].is_zero()) {
            long swap = -1;
            for (long i = k + 1; i < N && swap < 0; ++i)
                if (!M[static_cast<std::size_t>(i)][ku].is_zero()) swap = i;
            if (swap < 0) return Poly<K>();
            std::swap(M[ku], M[static_cast<std::size_t>(swap)]);
            negate = !negate;
        }
        for (long i = k + 1; i < N; ++i) {
            std::size_t iu = static_cast<std::size_t>(i);
            for (long j = k + 1; j < N; ++j) {
                std::size_t ju = static_cast<std::size_t>(j);
                auto [q, r] = Poly<K>::divmod(M[ku][ku] * M[iu][ju] - M[iu][ku] * M[ku][ju], prev);
                if (!r.is_zero()) throw std::logic_error("inexact division in Bareiss elimination");
                M[iu][ju] = std::move(q);
            }
            M[iu][ku] = Poly<K>();
        }
        prev = M[ku][ku];
    }
    Poly<K> det = M[static_cast<std::size_t>(N - 1)][static_cast<std::size_t>(N - 1)];
    return negate ? -det : det;
}

// t-adic valuation of disc(f) for a squarefree f over F(t), computed on the
// cleared-denominator forms: disc(f) = res(f, f') / lc(f) and
// res(H/D, G/E) = res(H, G) / (D^{deg f'} E^{deg f}).
template <class K>
long rf_disc_valuation(const Poly<RatFunc<K>>& f) {
    if (f.degree() < 1) throw std::domain_error("discriminant needs degree >= 1");
    Poly<RatFunc<K>> fp = f.derivative();
    auto [H, D] = rf_clear_denominators(f);
    auto [G, E] = rf_clear_denominators(fp);
    Poly<K> res = tvec_resultant(H, G);
    if (res.is_zero()) throw std::logic_error("squarefree polynomial with zero discriminant");
    return poly_t_order(res) - fp.degree() * poly_t_order(D) - f.degree() * poly_t_order(E) -
           v_t(f.leading());
}

// ---------------------------------------------------------------------------
// Henselization elements
// ---------------------------------------------------------------------------

// Element of F(t)^h: an expression tree over exact rational functions and
// simple-residue-root lifts, carrying a monic squarefree polynomial over F(t)
// that it satisfies (not necessarily irreducible) and rendering its Laurent
// expansion to any requested precision.
template <class K>
class HElem {
    using RF = RatFunc<K>;

    enum class Kind { Exact, Lift, Add, Mul, Neg, Inv };
    struct Node {
        Kind kind;
        RF exact;            // Exact
        Poly<RF> lift_poly;  // Lift
        K lift_root{};       // Lift
        std::shared_ptr<const Node> a, b;
    };

public:
    static HElem from_ratfunc(RF r) {
        HElem x;
        auto n = std::make_shared<Node>();
        n->kind = Kind::Exact;
        n->exact = r;
        x.node_ = n;
        x.exact_ = std::move(r);
        x.minpoly_ = linear_poly(*x.exact_);
        return x;
    }
    static HElem from_k(const K& k) { return from_ratfunc(RF::constant(k)); }

    static HElem lift(Poly<RF> f, K a) {
        hensel_lift(f, a, 1);  // validates monicity, integrality and the Hensel condition
        HElem x;
        auto n = std::make_shared<Node>();
        n->kind = Kind::Lift;
        n->lift_poly = f;
        n->lift_root = a;
        x.node_ = n;
        x.minpoly_ = rf_squarefree(f.monic());
        if (x.minpoly_.degree() == 1)
            x.exact_ = -x.minpoly_.coeffs()[0];
        else
            x.try_exact();  // the lift may be an exact polynomial root
        return x;
    }

    const Poly<RF>& minpoly() const { return minpoly_; }
    const std::optional<RF>& exact() const { return exact_; }

    friend HElem operator+(const HElem& x, const HElem& y) {
        if (x.exact_ && y.exact_) return from_ratfunc(*x.exact_ + *y.exact_);
        return combine(Kind::Add, x, y, sum_minpoly(x.minpoly_, y.minpoly_));
    }
    friend HElem operator*(const HElem& x, const HElem& y) {
        if (x.exact_ && y.exact_) return from_ratfunc(*x.exact_ * *y.exact_);
        return combine(Kind::Mul, x, y, prod_minpoly(x.minpoly_, y.minpoly_));
    }
    HElem operator-() const {
        if (exact_) return from_ratfunc(-*exact_);
        Poly<RF> m = minpoly_.compose(Poly<RF>({RF(), -RF::constant(K{}.one_like())})).monic();
        return combine(Kind::Neg, *this, *this, m);
    }
    friend HElem operator-(const HElem& x, const HElem& y) { return x + (-y); }
    HElem inverse() const {
        if (exact_) return from_ratfunc(exact_->inv());
        // strip the Y^k factor (the element is nonzero), then reverse
        std::vector<RF> c = minpoly_.coeffs();
        std::size_t k = 0;
        while (k < c.size() && c[k].is_zero()) ++k;
        std::vector<RF> rev(c.begin() + static_cast<long>(k), c.end());
        std::reverse(rev.begin(), rev.end());
        return combine(Kind::Inv, *this, *this, Poly<RF>(std::move(rev)).monic());
    }

    // Laurent expansion with all coefficients up to exponent `hi` exact.
    Laurent<K> laurent(long hi) const { return render(node_, hi); }

    // Image under a base-field morphism applied coefficientwise.  Lift nodes
    // are revalidated in the image; a base map that is not a field morphism
    // surfaces as a no_simple_root_error or wrong arithmetic downstream.
    HElem mapped(const std::function<K(const K&)>& f) const { return map_node(node_, f); }

    std::string str(long hi = 6) const {
        if (exact_) return exact_->str();
        return laurent(hi).str();
    }

private:
    HElem() = default;

    static Poly<RF> linear_poly(const RF& r) {
        return Poly<RF>({-r, RF::constant(K{}.one_like())});
    }

    static HElem combine(Kind k, const HElem& x, const HElem& y, Poly<RF> m) {
        HElem z;
        auto n = std::make_shared<Node>();
        n->kind = k;
        n->a = x.node_;
        n->b = y.node_;
        z.node_ = n;
        z.minpoly_ = rf_squarefree(m);
        if (z.minpoly_.degree() == 1) {
            z.exact_ = -z.minpoly_.coeffs()[0];
        } else {
            z.try_exact();
        }
        return z;
    }

    // Recognize elements whose expansion terminates as exact rational
    // functions of the simple form sum c_e t^e: if the visible window past a
    // margin is zero and the reconstructed polynomial satisfies the minpoly,
    // the element is that polynomial.
    void try_exact() {
        Laurent<K> w = laurent(8);
        long last = w.lo() - 1;
        for (long e = w.lo(); e <= w.hi(); ++e)
            if (!w.coeff(e).is_zero()) last = e;
        if (last > 4) return;  // no visible termination margin
        RF cand;
        for (long e = w.lo(); e <= last; ++e) {
            if (e >= 0)
                cand = cand + RF(Poly<K>::x_power(static_cast<u64>(e), w.coeff(e)));
            else
                cand = cand + RF(Poly<K>::constant(w.coeff(e)), Poly<K>::x_power(static_cast<u64>(-e), K{}.one_like()));
        }
        const Poly<RF>& m = minpoly_;
        RF acc = m.leading();
        for (long i = m.degree(); i > 0; --i) acc = acc * cand + m.coeffs()[static_cast<std::size_t>(i - 1)];
        if (acc.is_zero()) exact_ = cand;
    }

    static HElem map_node(const std::shared_ptr<const Node>& n, const std::function<K(const K&)>& f) {
        switch (n->kind) {
            case Kind::Exact:
                return from_ratfunc(map_ratfunc(n->exact, f));
            case Kind::Lift: {
                std::vector<RF> c;
                for (const auto& r : n->lift_poly.coeffs()) c.push_back(map_ratfunc(r, f));
                return lift(Poly<RF>(std::move(c)), f(n->lift_root));
            }
            case Kind::Add:
                return map_node(n->a, f) + map_node(n->b, f);
            case Kind::Mul:
                return map_node(n->a, f) * map_node(n->b, f);
            case Kind::Neg:
                return -map_node(n->a, f);
            case Kind::Inv:
                return map_node(n->a, f).inverse();
        }
        throw std::logic_error("unreachable");
    }

    static Laurent<K> render(const std::shared_ptr<const Node>& n, long hi) {
        switch (n->kind) {
            case Kind::Exact:
                return ratfunc_laurent(n->exact, hi);
            case Kind::Lift: {
                std::size_t p = static_cast<std::size_t>(std::max<long>(hi, 0));
                return Laurent<K>(0, hensel_lift(n->lift_poly, n->lift_root, p).coeffs()).truncated(std::max<long>(hi, 0));
            }
            case Kind::Add:
                return (render(n->a, hi) + render(n->b, hi)).truncated(hi);
            case Kind::Mul: {
                Laurent<K> A = render(n->a, hi), B = render(n->b, hi);
                long ra = hi - B.lo(), rb = hi - A.lo();
                if (ra > hi) A = render(n->a, ra);
                if (rb > hi) B = render(n->b, rb);
                return (A * B).truncated(hi);
            }
            case Kind::Neg:
                return -render(n->a, hi);
            case Kind::Inv: {
                Laurent<K> A = render(n->a, hi);
                auto o = A.order();
                long probe = hi;
                while (!o && probe < hi + 256) {
                    probe = 2 * std::max<long>(probe, 1) + 8;
                    A = render(n->a, probe);
                    o = A.order();
                }
                if (!o) throw std::domain_error("inverse of (apparent) zero");
                if (*o > 0 || hi + 2 * *o > A.hi()) A = render(n->a, hi + 2 * std::abs(*o) + 1);
                return A.inverse().truncated(hi);
            }
        }
        throw std::logic_error("unreachable");
    }

    // ---- resultant constructions -----------------------------------------
    //
    // Minimal-polynomial candidates come from resultants in an auxiliary
    // variable X of polynomials whose coefficients live in F(t)[Y].  A
    // Euclidean chain over the fraction field of that ring is far too slow
    // (nested gcd normalization), so the resultant is computed as a Sylvester
    // determinant with fraction-free (Bareiss) elimination over F(t)[Y].

    using FY = Poly<RF>;  // polynomials in Y over F(t)

    static FY fy_div_exact(const FY& a, const FY& b) {
        auto [q, r] = FY::divmod(a, b);
        if (!r.is_zero()) throw std::logic_error("inexact division in Bareiss elimination");
        return q;
    }

    // X-polynomials with F(t)[Y] coefficients are plain coefficient vectors
    // (index = X-power, trailing zeros trimmed by the callers below).

    static std::vector<FY> xp_mul(const std::vector<FY>& a, const std::vector<FY>& b) {
        std::vector<FY> r(a.size() + b.size() - 1, FY());
        for (std::size_t i = 0; i < a.size(); ++i)
            for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = r[i + j] + a[i] * b[j];
        return r;
    }
    static void xp_trim(std::vector<FY>& a) {
        while (!a.empty() && a.back().is_zero()) a.pop_back();
    }

    // res_X(A, B) for A, B in (F(t)[Y])[X].
    static FY res_x(std::vector<FY> A, std::vector<FY> B) {
        xp_trim(A);
        xp_trim(B);
        if (A.empty() || B.empty()) throw std::domain_error("resultant of zero polynomial");
        long m = static_cast<long>(A.size()) - 1, n = static_cast<long>(B.size()) - 1;
        FY one = FY::constant(RF::constant(K{}.one_like()));
        if (n == 0 || m == 0) {
            FY base = n == 0 ? B[0] : A[0];
            long e = n == 0 ? m : n;
            FY acc = one;
            for (long i = 0; i < e; ++i) acc = acc * base;
            return acc;
        }
        long N = m + n;
        std::vector<std::vector<FY>> M(static_cast<std::size_t>(N),
                                       std::vector<FY>(static_cast<std::size_t>(N), FY()));
        for (long i = 0; i < n; ++i)
            for (long k = 0; k <= m; ++k)
                M[static_cast<std::size_t>(i)][static_cast<std::size_t>(i + k)] =
                    A[static_cast<std::size_t>(m - k)];
        for (long i = 0; i < m; ++i)
            for (long k = 0; k <= n; ++k)
                M[static_cast<std::size_t>(n + i)][static_cast<std::size_t>(i + k)] =
                    B[static_cast<std::size_t>(n - k)];
        FY prev = one;
        bool negate = false;
        for (long k = 0; k + 1 < N; ++k) {
            std::size_t ku = static_cast<std::size_t>(k);
            if (M[ku][ku].is_zero()) {
                long swap = -1;
                for (long i = k + 1; i < N && swap < 0; ++i)
                    if (!M[static_cast<std::size_t>(i)][ku].is_zero()) swap = i;
                if (swap < 0) return FY();  // singular: resultant is zero
                std::swap(M[ku], M[static_cast<std::size_t>(swap)]);
                negate = !negate;
            }
            for (long i = k + 1; i < N; ++i) {
                std::size_t iu = static_cast<std::size_t>(i);
                for (long j = k + 1; j < N; ++j) {
                    std::size_t ju = static_cast<std::size_t>(j);
                    M[iu][ju] = fy_div_exact(M[ku][ku] * M[iu][ju] - M[iu][ku] * M[ku][ju], prev);
                }
                M[iu][ku] = FY();
            }
            prev = M[ku][ku];
        }
        FY det = M[static_cast<std::size_t>(N - 1)][static_cast<std::size_t>(N - 1)];
        return negate ? -det : det;
    }

    static std::vector<FY> embed_in_x(const Poly<RF>& f) {
        std::vector<FY> c;
        for (const auto& r : f.coeffs()) c.push_back(FY::constant(r));
        return c;
    }

    // res_X( f(X), g(Y - X) )
    static Poly<RF> sum_minpoly(const Poly<RF>& f, const Poly<RF>& g) {
        FY y(std::vector<RF>{RF(), RF::constant(K{}.one_like())});
        std::vector<FY> yminusx{y, -FY::constant(RF::constant(K{}.one_like()))};
        // Horner: g composed with (Y - X), coefficients in F(t)[Y]
        std::vector<FY> B{FY::constant(g.leading())};
        for (long i = g.degree(); i > 0; --i) {
            B = xp_mul(B, yminusx);
            B[0] = B[0] + FY::constant(g.coeffs()[static_cast<std::size_t>(i - 1)]);
        }
        return finish_minpoly(res_x(embed_in_x(f), std::move(B)));
    }

    // res_X( f(X), X^{deg g} g(Y/X) ):  coefficient of X^{n-j} is g_j Y^j
    static Poly<RF> prod_minpoly(const Poly<RF>& f, const Poly<RF>& g) {
        std::size_t ng = static_cast<std::size_t>(g.degree());
        std::vector<FY> b(ng + 1, FY());
        for (std::size_t j = 0; j <= ng; ++j)
            b[ng - j] = FY::x_power(j, RF::constant(K{}.one_like())).scale(g.coeffs()[j]);
        return finish_minpoly(res_x(embed_in_x(f), std::move(b)));
    }

    static Poly<RF> finish_minpoly(const FY& m) {
        if (m.degree() < 1) throw std::logic_error("degenerate resultant");
        return rf_squarefree(m.monic());
    }

    std::shared_ptr<const Node> node_;
    Poly<RF> minpoly_;
    std::optional<RF> exact_;
};

// ---------------------------------------------------------------------------
// Equality, valuation, residue
// ---------------------------------------------------------------------------

// Substitute Y -> Y * t^m and renormalize monic: root valuations shift by +m.
template <class K>
Poly<RatFunc<K>> scale_roots(const Poly<RatFunc<K>>& f, long m) {
    using RF = RatFunc<K>;
    RF t = RF(Poly<K>::x_power(1, K{}.one_like()));
    std::vector<RF> c = f.coeffs();
    long d = f.degree();
    for (long i = 0; i <= d; ++i) {
        RF factor = RF::constant(K{}.one_like());
        for (long k = 0; k < m * (d - i); ++k) factor = factor * t;
        c[static_cast<std::size_t>(i)] = c[static_cast<std::size_t>(i)] * factor;
    }
    return Poly<RF>(std::move(c));
}

// Least m >= 0 making all coefficient valuations of scale_roots(f, m)
// nonnegative (so every root of the scaled polynomial has valuation >= 0).
template <class K>
long integral_shift(const Poly<RatFunc<K>>& f) {
    long m = 0;
    long d = f.degree();
    for (long i = 0; i < d; ++i) {
        const auto& c = f.coeffs()[static_cast<std::size_t>(i)];
        if (c.is_zero()) continue;
        long deficit = -v_t(c);
        if (deficit > 0) {
            long need = (deficit + (d - i) - 1) / (d - i);  // ceil
            m = std::max(m, need);
        }
    }
    return m;
}

// Separation bound: distinct roots of the (integrally scaled) squarefree
// product of the two minpolys differ at a t-exponent <= v_t(discriminant), so
// agreement one step past the bound certifies equality.
template <class K>
long helem_separation_exponent(const HElem<K>& x, const HElem<K>& y) {
    Poly<RatFunc<K>> h = rf_squarefree(x.minpoly() * y.minpoly());
    long m = integral_shift(h);
    return rf_disc_valuation(scale_roots(h, m)) + 1 - m;
}

template <class K>
bool helem_eq(const HElem<K>& x, const HElem<K>& y) {
    if (x.exact() && y.exact()) return *x.exact() == *y.exact();
    Poly<RatFunc<K>> c = rf_poly_gcd(x.minpoly(), y.minpoly());
    if (c.degree() < 1) return false;
    long bound = helem_separation_exponent(x, y);
    Laurent<K> a = x.laurent(bound);
    Laurent<K> b = y.laurent(bound);
    for (long e = std::min(a.lo(), b.lo()); e <= bound; ++e)
        if (!(a.coeff(e) == b.coeff(e))) return false;
    return true;
}

template <class K>
TAdicValue helem_valuation(const HElem<K>& x) {
    if (x.exact()) return t_adic(*x.exact());
    if (helem_eq(x, HElem<K>::from_ratfunc(RatFunc<K>()))) return TAdicValue::infinity();
    long hi = 4;
    while (hi <= 512) {
        auto o = x.laurent(hi).order();
        if (o) return TAdicValue::finite(*o);
        hi *= 2;
    }
    throw std::logic_error("valuation search exceeded bound");
}

// Constant term of the expansion when v >= 0; nullopt for negative valuation.
template <class K>
std::optional<K> residue(const HElem<K>& x) {
    TAdicValue v = helem_valuation(x);
    if (v.infinite) return K{}.zero_like();
    if (v.v < 0) return std::nullopt;
    return x.laurent(0).coeff(0);
}

// ---------------------------------------------------------------------------
// Morphism action on elements
// ---------------------------------------------------------------------------

template <class K>
Poly<K> map_poly(const Poly<K>& p, const std::function<K(const K&)>& f) {
    std::vector<K> c;
    for (const auto& k : p.coeffs()) c.push_back(f(k));
    return Poly<K>(std::move(c));
}

template <class K>
RatFunc<K> map_ratfunc(const RatFunc<K>& r, const std::function<K(const K&)>& f) {
    if (r.is_zero()) return r;
    return RatFunc<K>(map_poly(r.num(), f), map_poly(r.den(), f));
}

// ---------------------------------------------------------------------------
// The henselization diagram stream
// ---------------------------------------------------------------------------

// Exact rational function from a pair index <num poly, den poly>, coefficients
// decoded through the base-field decoder.
template <class K>
std::optional<RatFunc<K>> decode_ratfunc(u64 index, const std::function<std::optional<K>(u64)>& kd) {
    auto decode_poly = [&kd](u64 x) -> std::optional<Poly<K>> {
        auto [len, body] = cantor_unpair(x);
        std::vector<u64> entries = tuple_decode(body, len + 1);
        std::vector<K> coeffs;
        coeffs.reserve(entries.size());
        for (u64 e : entries) {
            auto c = kd(e);
            if (!c) return std::nullopt;
            coeffs.push_back(std::move(*c));
        }
        return Poly<K>(std::move(coeffs));
    };
    auto [ni, di] = cantor_unpair(index);
    auto den = decode_poly(di);
    if (!den || den->is_zero()) return std::nullopt;
    auto num = decode_poly(ni);
    if (!num) return std::nullopt;
    return RatFunc<K>(std::move(*num), std::move(*den));
}

struct HenselConfig {
    u64 exact_per_stage = 8;     // exact rational-function candidates per stage
    u64 lift_per_stage = 500;    // bounded-height lift candidates swept per stage
    u64 closure_window_growth = 1;  // growth per stage of the closure pair window
    u64 degree_cap = 6;             // elements keep minpoly degree <= cap
    u64 height_cap = 3;             // max component height of swept lift data
    u64 max_lift_degree = 3;        // degrees swept for lift candidates
    long key_precision = 8;      // series prefix length for the dedupe key
};

// Diagram of the henselization F(t)^h: exact rational functions, simple
// residue roots of monic integral polynomials (swept in bounded height), and
// their arithmetic closure.  Codes are admission-ordered; dedupe is the
// decidable equality helem_eq.
template <class K>
class HenselStream : public DiagramStream {
public:
    explicit HenselStream(std::function<std::optional<K>(u64)> kdecode, HenselConfig cfg = {})
        : kd_(std::move(kdecode)), cfg_(cfg) {}

    const Signature& sig() const override { return field_signature(); }

    u64 code_bound(u64 stage) const override {
        ensure(stage);
        return bounds_[stage];
    }

    std::optional<u64> op_at(u64 stage, u64 sym, const std::vector<u64>& args) const override {
        ensure(stage);
        u64 lim = bounds_[stage];
        for (u64 a : args)
            if (a >= lim) return std::nullopt;
        // results of high-degree combinations are never admitted; leave the
        // fact permanently uncommitted rather than paying for the resultant
        if (sym >= 2 && reps_[args[0]].minpoly().degree() * reps_[args[1]].minpoly().degree() >
                            static_cast<long>(cfg_.degree_cap))
            return std::nullopt;
        return find_equal(op_value(sym, args), lim);
    }

    const HElem<K>& representative(u64 code) const {
        if (code >= reps_.size()) throw std::domain_error("code not yet admitted");
        return reps_[code];
    }
    std::optional<u64> find_code(const HElem<K>& x, u64 stage) const {
        ensure(stage);
        return find_equal(x, bounds_[stage]);
    }

private:
    HElem<K> op_value(u64 sym, const std::vector<u64>& args) const {
        switch (sym) {
            case 0: return HElem<K>::from_ratfunc(RatFunc<K>());
            case 1: return HElem<K>::from_ratfunc(RatFunc<K>::constant(K{}.one_like()));
            case 2: return cached_op(sym, args[0], args[1]);
            case 3: return cached_op(sym, args[0], args[1]);
            case 4: return cached_op(sym, args[0], args[1]);
        }
        throw std::domain_error("unknown symbol");
    }
    HElem<K> cached_op(u64 sym, u64 a, u64 b) const {
        auto key = std::make_tuple(sym, a, b);
        auto it = op_cache_.find(key);
        if (it != op_cache_.end()) return it->second;
        HElem<K> r = sym == 2 ? reps_[a] + reps_[b] : sym == 3 ? reps_[a] - reps_[b] : reps_[a] * reps_[b];
        return op_cache_.emplace(key, std::move(r)).first->second;
    }

    std::string series_key(const HElem<K>& x) const {
        Laurent<K> w = x.laurent(cfg_.key_precision);
        std::optional<long> e0;
        for (long e = w.lo(); e <= cfg_.key_precision && !e0; ++e)
            if (!w.coeff(e).is_zero()) e0 = e;
        if (!e0) return "Z";
        std::string out = "e" + std::to_string(*e0);
        for (long e = *e0; e <= cfg_.key_precision; ++e) out += "|" + w.coeff(e).str();
        return out;
    }

    std::optional<u64> find_equal(const HElem<K>& x, u64 limit) const {
        auto it = buckets_.find(series_key(x));
        if (it == buckets_.end()) return std::nullopt;
        for (u64 c : it->second)
            if (c < limit && helem_eq(reps_[c], x)) return c;
        return std::nullopt;
    }

    bool admit(HElem<K> x) const {
        if (x.minpoly().degree() > static_cast<long>(cfg_.degree_cap)) return false;
        std::string key = series_key(x);
        auto it = buckets_.find(key);
        if (it != buckets_.end())
            for (u64 c : it->second)
                if (helem_eq(reps_[c], x)) return false;
        u64 code = reps_.size();
        reps_.push_back(std::move(x));
        buckets_[key].push_back(code);
        return true;
    }

    void ensure(u64 stage) const {
        while (bounds_.size() <= stage) step();
    }

    void step() const {
        if (bounds_.empty()) {
            admit(HElem<K>::from_ratfunc(RatFunc<K>()));
            admit(HElem<K>::from_ratfunc(RatFunc<K>::constant(K{}.one_like())));
        }
        for (u64 i = 0; i < cfg_.exact_per_stage; ++i) {
            auto r = decode_ratfunc<K>(exact_idx_++, kd_);
            if (r) admit(HElem<K>::from_ratfunc(std::move(*r)));
        }
        for (u64 i = 0; i < cfg_.lift_per_stage && !sweep_done_; ++i) sweep_one();
        // closure window: all (op, a, b) with max(a, b) < closure_w_ have been
        // processed; the window widens every stage, so any pair of codes is
        // combined within a linear number of stages of both existing
        u64 target = std::min<u64>(reps_.size(), closure_w_ + cfg_.closure_window_growth);
        while (closure_w_ < target) {
            u64 w = closure_w_;
            for (u64 sym = 2; sym <= 4; ++sym) {
                for (u64 b = 0; b <= w; ++b) try_closure(sym, w, b);
                for (u64 a = 0; a < w; ++a) try_closure(sym, a, w);
            }
            ++closure_w_;
        }
        bounds_.push_back(reps_.size());
    }

    void try_closure(u64 sym, u64 a, u64 b) const {
        if (reps_[a].minpoly().degree() * reps_[b].minpoly().degree() >
            static_cast<long>(cfg_.degree_cap))
            return;
        admit(cached_op(sym, a, b));
    }

    // Bounded-height sweep over lift data (degree d in {2,3}; each non-leading
    // coefficient a t-polynomial of degree <= 1 with decoder indices <= h; a
    // decoder index <= h for the residue root).  Height h covers exactly the
    // tuples whose max component is h.
    void sweep_one() const {
        auto space_size = [this] {
            u64 total = 1;
            for (u64 j = 0; j < 2 * sweep_deg_ + 1; ++j) total *= sweep_h_ + 1;
            return total;
        };
        while (sweep_cursor_ >= space_size()) {
            sweep_cursor_ = 0;
            if (sweep_deg_ < cfg_.max_lift_degree) {
                ++sweep_deg_;
            } else {
                sweep_deg_ = 2;
                if (++sweep_h_ > cfg_.height_cap) {
                    sweep_done_ = true;
                    return;
                }
            }
        }
        u64 digits = 2 * sweep_deg_ + 1;
        u64 base = sweep_h_ + 1;
        u64 cur = sweep_cursor_++;
        std::vector<u64> digit(digits);
        u64 maxd = 0;
        for (u64 j = 0; j < digits; ++j) {
            digit[j] = cur % base;
            maxd = std::max(maxd, digit[j]);
            cur /= base;
        }
        if (maxd != sweep_h_) return;  // covered at a lower height
        auto a = kd_(digit[0]);
        if (!a) return;
        std::vector<K> resid;
        std::vector<RatFunc<K>> coeffs;
        for (u64 j = 0; j < sweep_deg_; ++j) {
            std::vector<K> c;
            for (u64 t = 0; t < 2; ++t) {
                auto k = kd_(digit[1 + 2 * j + t]);
                if (!k) return;
                c.push_back(std::move(*k));
            }
            resid.push_back(c[0]);
            coeffs.push_back(RatFunc<K>(Poly<K>(std::move(c))));
        }
        resid.push_back(K{}.one_like());
        Poly<K> fbar(std::move(resid));
        if (!fbar.eval(*a).is_zero()) return;
        if (fbar.derivative().eval(*a).is_zero()) return;
        coeffs.push_back(RatFunc<K>::constant(K{}.one_like()));
        admit(HElem<K>::lift(Poly<RatFunc<K>>(std::move(coeffs)), *a));
    }

    std::function<std::optional<K>(u64)> kd_;
    HenselConfig cfg_;
    mutable std::vector<HElem<K>> reps_;
    mutable std::vector<u64> bounds_;
    mutable std::map<std::string, std::vector<u64>> buckets_;
    mutable std::map<std::tuple<u64, u64, u64>, HElem<K>> op_cache_;
    mutable u64 closure_w_ = 0;
    mutable u64 exact_idx_ = 0;
    mutable u64 sweep_h_ = 1;
    mutable u64 sweep_deg_ = 2;
    mutable u64 sweep_cursor_ = 0;
    mutable bool sweep_done_ = false;
};

inline std::shared_ptr<HenselStream<Rational>> henselize_rationals(HenselConfig cfg = {}) {
    return std::make_shared<HenselStream<Rational>>(
        [](u64 i) -> std::optional<Rational> { return rational_from_index(i); }, cfg);
}

// Code-level morphism between henselizations induced by a base-field map.
template <class K>
struct HenselMorphism {
    std::shared_ptr<HenselStream<K>> src, dst;
    std::function<K(const K&)> base;

    std::optional<u64> map_code(u64 code, u64 stage) const {
        if (code >= src->code_bound(stage)) return std::nullopt;
        return dst->find_code(src->representative(code).mapped(base), stage);
    }
};

template <class K>
HenselMorphism<K> hensel_morphism(std::shared_ptr<HenselStream<K>> src,
                                  std::shared_ptr<HenselStream<K>> dst,
                                  std::function<K(const K&)> base) {
    return HenselMorphism<K>{std::move(src), std::move(dst), std::move(base)};
}

}  // namespace wb
