#pragma once

#include <string>
#include <tuple>
#include <vector>

#include "workbench/util.hpp"

namespace wb {

// Dense univariate polynomial over a field value type K.
// K must provide +,-,*,unary-, inv(), is_zero(), ==, zero_like(), one_like(), str().
// The zero polynomial has an empty coefficient vector; otherwise the trailing
// coefficient is nonzero.
template <class K>
class Poly {
public:
    Poly() = default;
    explicit Poly(std::vector<K> coeffs) : c_(std::move(coeffs)) { normalize(); }
    static Poly constant(const K& k) { return Poly(std::vector<K>{k}); }
    // c0 + c1*x + ... from an initializer-style vector.
    static Poly from(std::vector<K> coeffs) { return Poly(std::move(coeffs)); }
    static Poly x_power(u64 e, const K& one) {
        std::vector<K> c(e + 1, one.zero_like());
        c[e] = one;
        return Poly(std::move(c));
    }

    bool is_zero() const { return c_.empty(); }
    bool is_one() const { return c_.size() == 1 && c_[0] == c_[0].one_like(); }
    // degree of the zero polynomial is -1
    long degree() const { return static_cast<long>(c_.size()) - 1; }
    const std::vector<K>& coeffs() const { return c_; }
    K coeff(std::size_t i) const {
        if (i < c_.size()) return c_[i];
        if (c_.empty()) throw std::domain_error("coeff of zero polynomial needs exemplar");
        return c_[0].zero_like();
    }
    const K& leading() const {
        if (c_.empty()) throw std::domain_error("leading coeff of zero polynomial");
        return c_.back();
    }
    bool is_monic() const { return !c_.empty() && c_.back() == c_.back().one_like(); }

    friend Poly operator+(const Poly& a, const Poly& b) {
        std::vector<K> r = a.c_;
        if (r.size() < b.c_.size()) r.resize(b.c_.size(), b.c_[0].zero_like());
        for (std::size_t i = 0; i < b.c_.size(); ++i) r[i] = r[i] + b.c_[i];
        return Poly(std::move(r));
    }
    friend Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }
    Poly operator-() const {
        std::vector<K> r = c_;
        for (auto& k : r) k = -k;
        return Poly(std::move(r));
    }
    friend Poly operator*(const Poly& a, const Poly& b) {
        if (a.is_zero() || b.is_zero()) return Poly();
        std::vector<K> r(a.c_.size() + b.c_.size() - 1, a.c_[0].zero_like());
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] = r[i + j] + a.c_[i] * b.c_[j];
        return Poly(std::move(r));
    }
    Poly scale(const K& k) const {
        std::vector<K> r = c_;
        for (auto& x : r) x = x * k;
        return Poly(std::move(r));
    }

    friend bool operator==(const Poly& a, const Poly& b) {
        if (a.c_.size() != b.c_.size()) return false;
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            if (!(a.c_[i] == b.c_[i])) return false;
        return true;
    }
    friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

    // Quotient and remainder; divisor must be nonzero.
    static std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b) {
        if (b.is_zero()) throw std::domain_error("polynomial division by zero");
        Poly rem = a;
        if (a.degree() < b.degree()) return {Poly(), rem};
        K lcinv = b.leading().inv();
        std::vector<K> q(static_cast<std::size_t>(a.degree() - b.degree()) + 1, b.leading().zero_like());
        while (!rem.is_zero() && rem.degree() >= b.degree()) {
            K f = rem.leading() * lcinv;
            std::size_t shift = static_cast<std::size_t>(rem.degree() - b.degree());
            q[shift] = f;
            std::vector<K> r = rem.c_;
            for (std::size_t i = 0; i < b.c_.size(); ++i) r[i + shift] = r[i + shift] - f * b.c_[i];
            r.pop_back();  // leading term cancels exactly
            rem = Poly(std::move(r));
        }
        return {Poly(std::move(q)), rem};
    }

    Poly monic() const {
        if (is_zero()) return *this;
        return scale(leading().inv());
    }

    Poly derivative() const {
        if (c_.size() <= 1) return Poly();
        std::vector<K> r(c_.size() - 1, c_[0].zero_like());
        for (std::size_t i = 1; i < c_.size(); ++i) {
            K m = c_[0].zero_like();
            for (std::size_t j = 0; j < i; ++j) m = m + c_[i].one_like();
            r[i - 1] = c_[i] * m;
        }
        return Poly(std::move(r));
    }

    K eval(const K& x) const {
        if (c_.empty()) return x.zero_like();
        K acc = c_.back();
        for (std::size_t i = c_.size() - 1; i > 0; --i) acc = acc * x + c_[i - 1];
        return acc;
    }

    // Substitute x -> g(x).
    Poly compose(const Poly& g) const {
        if (c_.empty()) return Poly();
        Poly acc = Poly::constant(c_.back());
        for (std::size_t i = c_.size() - 1; i > 0; --i) acc = acc * g + Poly::constant(c_[i - 1]);
        return acc;
    }

    std::string str(const std::string& var = "x") const;

private:
    void normalize() {
        while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
    }
    std::vector<K> c_;
};

template <class K>
Poly<K> poly_gcd(Poly<K> a, Poly<K> b) {
    while (!b.is_zero()) {
        auto [q, r] = Poly<K>::divmod(a, b);
        (void)q;
        a = b;
        b = r;
    }
    if (a.is_zero()) return a;
    return a.monic();
}

// Extended gcd: returns (g, s, t) monic with s*a + t*b = g.
template <class K>
std::tuple<Poly<K>, Poly<K>, Poly<K>> poly_xgcd(const Poly<K>& a, const Poly<K>& b) {
    Poly<K> r0 = a, r1 = b;
    Poly<K> s0, s1, t0, t1;
    if (!a.is_zero()) {
        s0 = Poly<K>::constant(a.leading().one_like());
        t1 = Poly<K>::constant(a.leading().one_like());
    } else if (!b.is_zero()) {
        s0 = Poly<K>();
        t1 = Poly<K>::constant(b.leading().one_like());
        s1 = Poly<K>();
        t0 = Poly<K>();
    }
    while (!r1.is_zero()) {
        auto [q, r] = Poly<K>::divmod(r0, r1);
        Poly<K> s2 = s0 - q * s1;
        Poly<K> t2 = t0 - q * t1;
        r0 = r1; r1 = r;
        s0 = s1; s1 = s2;
        t0 = t1; t1 = t2;
    }
    if (r0.is_zero()) return {r0, s0, t0};
    K lcinv = r0.leading().inv();
    return {r0.scale(lcinv), s0.scale(lcinv), t0.scale(lcinv)};
}

// Resultant over a field, by the Euclidean chain:
// res(f,g) = lc(g)^(deg f - deg r) * (-1)^(deg f * deg g) * res(g, r).
// res(f, const c) = c^(deg f); res with a zero input is a domain error.
// Sign convention is the standard one:
// res(f,g) = lc(f)^deg(g) * lc(g)^deg(f) * prod_{i,j}(alpha_i - beta_j),
// e.g. res(x - a, x - b) = a - b.
template <class K>
K resultant(Poly<K> f, Poly<K> g) {
    if (f.is_zero() || g.is_zero()) throw std::domain_error("resultant of zero polynomial");
    K one = f.leading().one_like();
    K acc = one;
    bool negate = false;
    while (g.degree() > 0) {
        auto [q, r] = Poly<K>::divmod(f, g);
        (void)q;
        if (r.is_zero()) return one.zero_like();
        long e = f.degree() - r.degree();
        K lc = g.leading();
        for (long i = 0; i < e; ++i) acc = acc * lc;
        if ((f.degree() % 2) && (g.degree() % 2)) negate = !negate;
        f = g;
        g = r;
    }
    // g is a nonzero constant.
    K c = g.coeff(0);
    for (long i = 0; i < f.degree(); ++i) acc = acc * c;
    return negate ? -acc : acc;
}

// disc(f) up to the standard sign: res(f, f') / lc(f).
template <class K>
K discriminant(const Poly<K>& f) {
    if (f.degree() < 1) throw std::domain_error("discriminant needs degree >= 1");
    Poly<K> d = f.derivative();
    if (d.is_zero()) return f.leading().zero_like();
    return resultant(f, d) * f.leading().inv();
}

template <class K>
Poly<K> squarefree_part(const Poly<K>& f) {
    if (f.degree() < 1) return f.monic();
    Poly<K> d = f.derivative();
    if (d.is_zero()) return f.monic();
    Poly<K> g = poly_gcd(f, d);
    if (g.degree() < 1) return f.monic();
    auto [q, r] = Poly<K>::divmod(f, g);
    (void)r;
    return q.monic();
}

template <class K>
std::string Poly<K>::str(const std::string& var) const {
    if (c_.empty()) return "0";
    std::string out;
    for (std::size_t i = c_.size(); i > 0; --i) {
        const K& k = c_[i - 1];
        if (k.is_zero()) continue;
        if (!out.empty()) out += " + ";
        std::size_t e = i - 1;
        if (e == 0) {
            out += k.str();
        } else {
            if (!(k == k.one_like())) out += k.str() + "*";
            out += var;
            if (e > 1) out += "^" + std::to_string(e);
        }
    }
    return out.empty() ? "0" : out;
}

}  // namespace wb
