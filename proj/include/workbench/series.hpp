#pragma once

#include <string>
#include <vector>

#include "workbench/poly.hpp"

namespace wb {

// Truncated power series in t over a field value type K: coefficients
// c[0..prec], i.e. the series is known mod t^(prec+1).  Arithmetic truncates
// to the smaller precision of the operands.
template <class K>
class TruncSeries {
public:
    TruncSeries() = default;
    TruncSeries(std::vector<K> coeffs, std::size_t prec) : c_(std::move(coeffs)) {
        c_.resize(prec + 1, exemplar().zero_like());
    }
    static TruncSeries constant(const K& k, std::size_t prec) {
        std::vector<K> c(prec + 1, k.zero_like());
        c[0] = k;
        return TruncSeries(std::move(c), prec);
    }

    std::size_t precision() const { return c_.empty() ? 0 : c_.size() - 1; }
    const std::vector<K>& coeffs() const { return c_; }
    K coeff(std::size_t i) const {
        if (i < c_.size()) return c_[i];
        throw std::domain_error("series coefficient beyond cached precision");
    }
    bool is_zero() const {
        for (const auto& k : c_)
            if (!k.is_zero()) return false;
        return true;
    }

    TruncSeries truncated(std::size_t prec) const {
        std::vector<K> c(c_.begin(), c_.begin() + std::min(c_.size(), prec + 1));
        return TruncSeries(std::move(c), prec);
    }

    friend TruncSeries operator+(const TruncSeries& a, const TruncSeries& b) {
        std::size_t p = std::min(a.precision(), b.precision());
        std::vector<K> r(p + 1, a.exemplar().zero_like());
        for (std::size_t i = 0; i <= p; ++i) r[i] = a.c_[i] + b.c_[i];
        return TruncSeries(std::move(r), p);
    }
    friend TruncSeries operator-(const TruncSeries& a, const TruncSeries& b) { return a + (-b); }
    TruncSeries operator-() const {
        std::vector<K> r = c_;
        for (auto& k : r) k = -k;
        return TruncSeries(std::move(r), precision());
    }
    friend TruncSeries operator*(const TruncSeries& a, const TruncSeries& b) {
        std::size_t p = std::min(a.precision(), b.precision());
        std::vector<K> r(p + 1, a.exemplar().zero_like());
        for (std::size_t i = 0; i <= p; ++i)
            for (std::size_t j = 0; i + j <= p; ++j) r[i + j] = r[i + j] + a.c_[i] * b.c_[j];
        return TruncSeries(std::move(r), p);
    }
    TruncSeries scale(const K& k) const {
        std::vector<K> r = c_;
        for (auto& x : r) x = x * k;
        return TruncSeries(std::move(r), precision());
    }

    // Multiplicative inverse; the constant term must be nonzero (a unit).
    TruncSeries inv() const {
        if (c_.empty() || c_[0].is_zero()) throw std::domain_error("series inverse needs unit constant term");
        std::size_t p = precision();
        std::vector<K> r(p + 1, c_[0].zero_like());
        K u = c_[0].inv();
        r[0] = u;
        for (std::size_t n = 1; n <= p; ++n) {
            K acc = c_[0].zero_like();
            for (std::size_t i = 1; i <= n; ++i) acc = acc + c_[i] * r[n - i];
            r[n] = -(u * acc);
        }
        return TruncSeries(std::move(r), p);
    }

    friend bool operator==(const TruncSeries& a, const TruncSeries& b) {
        std::size_t p = std::min(a.precision(), b.precision());
        for (std::size_t i = 0; i <= p; ++i)
            if (!(a.c_[i] == b.c_[i])) return false;
        return true;
    }

    // Least i with a nonzero coefficient; -1 if zero to cached precision.
    long t_order() const {
        for (std::size_t i = 0; i < c_.size(); ++i)
            if (!c_[i].is_zero()) return static_cast<long>(i);
        return -1;
    }

    std::string str(const std::string& var = "t") const {
        std::string out;
        for (std::size_t i = 0; i < c_.size(); ++i) {
            if (c_[i].is_zero()) continue;
            if (!out.empty()) out += " + ";
            if (i == 0) {
                out += c_[i].str();
            } else {
                if (!(c_[i] == c_[i].one_like())) out += c_[i].str() + "*";
                out += var;
                if (i > 1) out += "^" + std::to_string(i);
            }
        }
        if (out.empty()) out = "0";
        out += " + O(" + var + "^" + std::to_string(c_.size()) + ")";
        return out;
    }

private:
    K exemplar() const { return c_.empty() ? K{} : c_[0]; }
    std::vector<K> c_;
};

// Evaluate a polynomial (over K, or over a type convertible coefficientwise)
// at a series, truncating at the series precision.
template <class K>
TruncSeries<K> poly_eval_series(const Poly<K>& f, const TruncSeries<K>& x) {
    std::size_t p = x.precision();
    K zero = x.coeffs().empty() ? K{} : x.coeffs()[0].zero_like();
    TruncSeries<K> acc = TruncSeries<K>::constant(zero, p);
    if (f.is_zero()) return acc;
    acc = TruncSeries<K>::constant(f.leading(), p);
    for (long i = f.degree(); i > 0; --i)
        acc = acc * x + TruncSeries<K>::constant(f.coeff(static_cast<std::size_t>(i - 1)), p);
    return acc;
}

}  // namespace wb
