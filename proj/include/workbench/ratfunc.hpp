#pragma once

#include <limits>
#include <string>

#include "workbench/poly.hpp"

namespace wb {

// Rational function p/q over a base field K, in normal form:
// denominator monic, gcd(num, den) = 1.  A field value type itself,
// so RatFunc<RatFunc<K>> etc. compose.  K{} must be the zero of K with a
// working one_like().
template <class K>
class RatFunc {
public:
    RatFunc() : den_(Poly<K>::constant(K{}.one_like())) {}
    explicit RatFunc(Poly<K> num) : num_(std::move(num)), den_(Poly<K>::constant(K{}.one_like())) {}
    RatFunc(Poly<K> num, Poly<K> den) : num_(std::move(num)), den_(std::move(den)) { normalize(); }
    static RatFunc constant(const K& k) { return RatFunc(Poly<K>::constant(k)); }
    static RatFunc variable() { return RatFunc(Poly<K>::x_power(1, K{}.one_like())); }

    const Poly<K>& num() const { return num_; }
    const Poly<K>& den() const { return den_; }

    bool is_zero() const { return num_.is_zero(); }
    bool is_polynomial() const { return den_.degree() == 0; }

    RatFunc zero_like() const { return RatFunc(); }
    RatFunc one_like() const { return constant(K{}.one_like()); }

    RatFunc inv() const {
        if (is_zero()) throw std::domain_error("division by zero");
        return RatFunc(den_, num_);
    }

    friend RatFunc operator+(const RatFunc& a, const RatFunc& b) {
        if (a.is_zero()) return b;
        if (b.is_zero()) return a;
        return RatFunc(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend RatFunc operator-(const RatFunc& a, const RatFunc& b) { return a + (-b); }
    RatFunc operator-() const {
        RatFunc r = *this;
        r.num_ = -r.num_;
        return r;
    }
    friend RatFunc operator*(const RatFunc& a, const RatFunc& b) {
        if (a.is_zero() || b.is_zero()) return RatFunc();
        return RatFunc(a.num_ * b.num_, a.den_ * b.den_);
    }
    friend RatFunc operator/(const RatFunc& a, const RatFunc& b) { return a * b.inv(); }

    friend bool operator==(const RatFunc& a, const RatFunc& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const RatFunc& a, const RatFunc& b) { return !(a == b); }

    std::string str(const std::string& var = "t") const {
        if (is_zero()) return "0";
        std::string n = num_.str(var);
        if (is_polynomial()) return n;
        return "(" + n + ")/(" + den_.str(var) + ")";
    }

private:
    void normalize() {
        if (den_.is_zero()) throw std::domain_error("zero denominator");
        if (num_.is_zero()) {
            den_ = Poly<K>::constant(K{}.one_like());
            return;
        }
        Poly<K> g = poly_gcd(num_, den_);
        if (g.degree() > 0) {
            num_ = Poly<K>::divmod(num_, g).first;
            den_ = Poly<K>::divmod(den_, g).first;
        }
        K lcinv = den_.leading().inv();
        num_ = num_.scale(lcinv);
        den_ = den_.scale(lcinv);
    }

    Poly<K> num_;
    Poly<K> den_;
};

// t-adic valuation on K(t): order of vanishing at t = 0.
// Returns kValInf for 0.
inline constexpr long kValInf = std::numeric_limits<long>::max();

template <class K>
long poly_t_order(const Poly<K>& p) {
    if (p.is_zero()) return kValInf;
    for (std::size_t i = 0; i < p.coeffs().size(); ++i)
        if (!p.coeffs()[i].is_zero()) return static_cast<long>(i);
    return kValInf;
}

template <class K>
long v_t(const RatFunc<K>& r) {
    if (r.is_zero()) return kValInf;
    return poly_t_order(r.num()) - poly_t_order(r.den());
}

}  // namespace wb
