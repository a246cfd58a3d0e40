#pragma once

#include <map>
#include <numeric>
#include <tuple>
#include <string>
#include <vector>

#include "workbench/poly.hpp"
#include "workbench/rational.hpp"

namespace wb {

// Conductors are 1 or squarefree products of distinct odd primes.
inline bool valid_conductor(u64 n) {
    if (n == 0 || n % 2 == 0) return false;
    for (auto [p, e] : factorize(n))
        if (e > 1) return false;
    return true;
}

// phi(n) for squarefree n, without materializing any polynomial.
inline u64 euler_phi_squarefree(u64 n) {
    u64 r = 1;
    for (auto [p, e] : factorize(n)) {
        (void)e;
        r *= p - 1;
    }
    return r;
}

// n-th cyclotomic polynomial over Q, via (x^n - 1) / prod_{d|n, d<n} Phi_d.
// Only conductors accepted by valid_conductor are supported.
inline const Poly<Rational>& cyclotomic(u64 n) {
    if (!valid_conductor(n)) throw std::domain_error("unsupported conductor " + std::to_string(n));
    static std::map<u64, Poly<Rational>> cache;
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    // x^n - 1
    std::vector<Rational> c(n + 1, Rational(0));
    c[0] = Rational(-1);
    c[n] = Rational(1);
    Poly<Rational> acc(std::move(c));
    for (u64 d = 1; d < n; ++d) {
        if (n % d == 0) {
            auto [q, r] = Poly<Rational>::divmod(acc, cyclotomic(d));
            if (!r.is_zero()) throw std::logic_error("cyclotomic division not exact");
            acc = q;
        }
    }
    return cache.emplace(n, std::move(acc)).first->second;
}

// Element of Q(zeta_n), represented as a Q-polynomial in zeta reduced mod Phi_n.
// Conductor 1 is Q itself.  Mixed-conductor arithmetic embeds both operands
// into the compositum (the product conductor, valid since conductors are
// squarefree and coprime-or-nested here).
class CycloElt {
public:
    CycloElt() : n_(1), p_() {}
    CycloElt(u64 conductor, Poly<Rational> p) : n_(conductor), p_(std::move(p)) { reduce(); }
    static CycloElt rational(const Rational& q) { return CycloElt(1, Poly<Rational>::constant(q)); }
    static CycloElt zeta(u64 conductor) {
        if (conductor == 1) return CycloElt::rational(Rational(1));
        return CycloElt(conductor, Poly<Rational>::x_power(1, Rational(1)));
    }

    u64 conductor() const { return n_; }
    const Poly<Rational>& poly() const { return p_; }

    bool is_zero() const { return p_.is_zero(); }
    bool is_rational() const { return p_.degree() <= 0; }
    Rational as_rational() const {
        if (!is_rational()) throw std::domain_error("not a rational");
        return p_.is_zero() ? Rational(0) : p_.coeff(0);
    }

    CycloElt zero_like() const { return CycloElt(); }
    CycloElt one_like() const { return CycloElt::rational(Rational(1)); }

    // Canonical embedding into Q(zeta_m) for n_ | m: zeta_n -> zeta_m^(m/n).
    CycloElt embedded(u64 m) const {
        if (m == n_) return *this;
        if (m % n_ != 0) throw std::domain_error("not a conductor multiple");
        if (!valid_conductor(m)) throw std::domain_error("unsupported conductor " + std::to_string(m));
        Poly<Rational> img = p_.compose(Poly<Rational>::x_power(m / n_, Rational(1)));
        return CycloElt(m, std::move(img));
    }

    CycloElt inv() const {
        if (is_zero()) throw std::domain_error("division by zero");
        if (n_ == 1) return CycloElt::rational(as_rational().inv());
        auto [g, s, t] = poly_xgcd(p_, cyclotomic(n_));
        (void)t;
        if (g.degree() != 0) throw std::logic_error("non-invertible cyclotomic element");
        return CycloElt(n_, s.scale(g.coeff(0).inv()));
    }

    friend CycloElt operator+(const CycloElt& a, const CycloElt& b) {
        auto [x, y, m] = align(a, b);
        return CycloElt(m, x + y);
    }
    friend CycloElt operator-(const CycloElt& a, const CycloElt& b) { return a + (-b); }
    CycloElt operator-() const { return CycloElt(n_, -p_); }
    friend CycloElt operator*(const CycloElt& a, const CycloElt& b) {
        auto [x, y, m] = align(a, b);
        return CycloElt(m, x * y);
    }
    friend CycloElt operator/(const CycloElt& a, const CycloElt& b) { return a * b.inv(); }

    friend bool operator==(const CycloElt& a, const CycloElt& b) {
        auto [x, y, m] = align(a, b);
        (void)m;
        return x == y;
    }
    friend bool operator!=(const CycloElt& a, const CycloElt& b) { return !(a == b); }

    std::string str() const { return p_.str("z"); }

private:
    static u64 lcm_conductor(u64 a, u64 b) {
        u64 g = std::gcd(a, b);
        return a / g * b;
    }
    static std::tuple<Poly<Rational>, Poly<Rational>, u64> align(const CycloElt& a, const CycloElt& b) {
        if (a.n_ == b.n_) return {a.p_, b.p_, a.n_};
        u64 m = lcm_conductor(a.n_, b.n_);
        return {a.embedded(m).p_, b.embedded(m).p_, m};
    }
    void reduce() {
        if (n_ == 1) {
            if (p_.degree() > 0) throw std::domain_error("nonconstant element of Q");
            return;
        }
        // already in normal form; avoids materializing the cyclotomic
        // polynomial for conductors that are never arithmetically touched
        if (p_.degree() < static_cast<long>(euler_phi_squarefree(n_))) return;
        const auto& phi = cyclotomic(n_);
        if (p_.degree() >= phi.degree()) p_ = Poly<Rational>::divmod(p_, phi).second;
    }

    u64 n_;
    Poly<Rational> p_;
};

// Extended-gcd inverse, exposed under the spec's name.
inline CycloElt cyclo_inverse(const CycloElt& a) { return a.inv(); }

// Whether Phi_q (q an odd prime) has a root in Q(zeta_n): holds iff q | n,
// in which case zeta_n^(n/q) is a primitive q-th root of unity.
inline bool has_primitive_root(u64 q, u64 n) {
    if (!is_prime_u64(q) || q == 2) throw std::domain_error("q must be an odd prime");
    if (!valid_conductor(n)) throw std::domain_error("unsupported conductor " + std::to_string(n));
    return n % q == 0;
}

}  // namespace wb
