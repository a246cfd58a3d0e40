#pragma once

#include <gmpxx.h>

#include <functional>
#include <optional>
#include <string>
#include <string_view>

#include "workbench/util.hpp"

namespace wb {

// Exact rational, always reduced, denominator > 0.  Backed by GMP.
class Rational {
public:
    Rational() : v_(0) {}
    Rational(long n) : v_(n) {}
    Rational(long num, long den) : v_(num, den) {
        if (den == 0) throw std::domain_error("zero denominator");
        v_.canonicalize();
    }
    explicit Rational(mpq_class v) : v_(std::move(v)) { v_.canonicalize(); }
    explicit Rational(const mpz_class& n) : v_(n) {}

    static std::optional<Rational> parse(std::string_view s);

    const mpq_class& raw() const { return v_; }
    mpz_class num() const { return v_.get_num(); }
    mpz_class den() const { return v_.get_den(); }

    bool is_zero() const { return v_ == 0; }
    bool is_one() const { return v_ == 1; }
    bool is_integer() const { return v_.get_den() == 1; }

    Rational zero_like() const { return Rational(); }
    Rational one_like() const { return Rational(1); }

    Rational inv() const {
        if (is_zero()) throw std::domain_error("division by zero");
        return Rational(1 / v_);
    }

    // max(|num|, den): the usual height, used for canonical enumerations.
    mpz_class height() const {
        mpz_class a = abs(v_.get_num());
        mpz_class d = v_.get_den();
        return a > d ? a : d;
    }

    friend Rational operator+(const Rational& a, const Rational& b) { return Rational(mpq_class(a.v_ + b.v_)); }
    friend Rational operator-(const Rational& a, const Rational& b) { return Rational(mpq_class(a.v_ - b.v_)); }
    friend Rational operator*(const Rational& a, const Rational& b) { return Rational(mpq_class(a.v_ * b.v_)); }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.is_zero()) throw std::domain_error("division by zero");
        return Rational(mpq_class(a.v_ / b.v_));
    }
    Rational operator-() const { return Rational(mpq_class(-v_)); }

    Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
    Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
    Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }

    friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
    friend bool operator!=(const Rational& a, const Rational& b) { return a.v_ != b.v_; }
    friend bool operator<(const Rational& a, const Rational& b) { return a.v_ < b.v_; }
    friend bool operator<=(const Rational& a, const Rational& b) { return a.v_ <= b.v_; }
    friend bool operator>(const Rational& a, const Rational& b) { return a.v_ > b.v_; }

    std::string str() const { return v_.get_str(); }

private:
    mpq_class v_;
};

inline std::optional<Rational> Rational::parse(std::string_view s) {
    if (s.empty()) return std::nullopt;
    try {
        mpq_class v(std::string(s), 10);
        if (v.get_den() == 0) return std::nullopt;
        v.canonicalize();
        return Rational(std::move(v));
    } catch (const std::invalid_argument&) {
        return std::nullopt;
    }
}

// Canonical surjection N -> Q used by deterministic enumerations:
// n = 0 -> 0; otherwise decode <s, <a, b>> with sign s, value (a+1)/(b+1).
inline Rational rational_from_index(u64 n) {
    if (n == 0) return Rational(0);
    auto [s, rest] = cantor_unpair(n - 1);
    auto [a, b] = cantor_unpair(rest);
    Rational q(static_cast<long>(a) + 1, static_cast<long>(b) + 1);
    return (s % 2 == 0) ? q : -q;
}

}  // namespace wb

template <>
struct std::hash<wb::Rational> {
    std::size_t operator()(const wb::Rational& q) const {
        return std::hash<std::string>()(q.str());
    }
};
