#pragma once

#include <cstdint>
#include <numeric>
#include <string>

#include "ringspectra/error.hpp"

namespace ringspectra::arith {

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

inline std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
    if (m == 1) return 0;
    std::uint64_t result = 1;
    base %= m;
    while (exp > 0) {
        if (exp & 1) result = mulmod(result, base, m);
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    return result;
}

/// Extended gcd over signed 64-bit: returns g and sets x, y with a*x + b*y = g.
inline std::int64_t ext_gcd(std::int64_t a, std::int64_t b, std::int64_t& x, std::int64_t& y) {
    std::int64_t x0 = 1, y0 = 0, x1 = 0, y1 = 1;
    while (b != 0) {
        std::int64_t q = a / b;
        std::int64_t t = a - q * b;
        a = b;
        b = t;
        t = x0 - q * x1;
        x0 = x1;
        x1 = t;
        t = y0 - q * y1;
        y0 = y1;
        y1 = t;
    }
    x = x0;
    y = y0;
    return a;
}

/// The residue 0 < r < p with r*d == a (mod p), computed as a * d^(p-2) mod p.
inline std::uint64_t frac_mod(std::uint64_t a, std::uint64_t d, std::uint64_t p) {
    if (p < 2) throw InvalidArgument("frac_mod: modulus must be a prime >= 2");
    if (d % p == 0) throw NoInverse("frac_mod: " + std::to_string(d) + " has no inverse mod " + std::to_string(p));
    if (a == 0) throw InvalidArgument("frac_mod: numerator must be positive");
    return mulmod(a % p, powmod(d, p - 2, p), p);
}

}  // namespace ringspectra::arith
