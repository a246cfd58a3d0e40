#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace wb {

using u64 = std::uint64_t;
using i64 = std::int64_t;

// Three-valued verdicts used by bounded/stagewise queries.
enum class Tri { False = 0, Unknown = 1, True = 2 };

inline Tri tri_and(Tri a, Tri b) { return static_cast<Tri>(std::min(static_cast<int>(a), static_cast<int>(b))); }
inline Tri tri_or(Tri a, Tri b) { return static_cast<Tri>(std::max(static_cast<int>(a), static_cast<int>(b))); }
inline const char* to_string(Tri t) {
    switch (t) {
        case Tri::False: return "false";
        case Tri::True: return "true";
        default: return "unknown";
    }
}

struct overflow_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Cantor pairing <a,b> = (a+b)(a+b+1)/2 + b, total bijection N^2 <-> N.
inline u64 cantor_pair(u64 a, u64 b) {
    unsigned __int128 s = static_cast<unsigned __int128>(a) + b;
    unsigned __int128 r = s * (s + 1) / 2 + b;
    if (r > static_cast<unsigned __int128>(UINT64_MAX)) throw overflow_error("cantor_pair overflow");
    return static_cast<u64>(r);
}

inline std::pair<u64, u64> cantor_unpair(u64 z) {
    // s = floor((sqrt(8z+1)-1)/2), computed with integer correction.
    long double d = std::sqrt(8.0L * static_cast<long double>(z) + 1.0L);
    u64 s = static_cast<u64>((d - 1.0L) / 2.0L);
    auto tri = [](u64 n) { return static_cast<unsigned __int128>(n) * (n + 1) / 2; };
    while (s > 0 && tri(s) > z) --s;
    while (tri(s + 1) <= z) ++s;
    u64 b = z - static_cast<u64>(tri(s));
    return {s - b, b};
}

// Left-nested tuple code: code(t1..tk) = <code(t1..t_{k-1}), tk>, code of a 1-tuple is the value.
inline u64 tuple_encode(const std::vector<u64>& t) {
    if (t.empty()) return 0;
    u64 c = t[0];
    for (std::size_t i = 1; i < t.size(); ++i) c = cantor_pair(c, t[i]);
    return c;
}

inline std::vector<u64> tuple_decode(u64 code, std::size_t len) {
    std::vector<u64> out(len);
    if (len == 0) return out;
    for (std::size_t i = len - 1; i > 0; --i) {
        auto [a, b] = cantor_unpair(code);
        out[i] = b;
        code = a;
    }
    out[0] = code;
    return out;
}

inline bool is_prime_u64(u64 n) {
    if (n < 2) return false;
    for (u64 d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

// 0-based: nth_prime(0) = 2.
inline u64 nth_prime(u64 n) {
    u64 count = 0;
    for (u64 p = 2;; ++p) {
        if (is_prime_u64(p)) {
            if (count == n) return p;
            ++count;
        }
    }
}

// 0-based index of a prime p (p must be prime).
inline u64 prime_index(u64 p) {
    u64 idx = 0;
    for (u64 q = 2; q < p; ++q)
        if (is_prime_u64(q)) ++idx;
    return idx;
}

inline std::vector<std::pair<u64, u64>> factorize(u64 n) {
    std::vector<std::pair<u64, u64>> fs;
    for (u64 d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            u64 e = 0;
            while (n % d == 0) { n /= d; ++e; }
            fs.emplace_back(d, e);
        }
    }
    if (n > 1) fs.emplace_back(n, 1);
    return fs;
}

}  // namespace wb
