#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "ringspectra/arith/polynomial.hpp"

namespace ringspectra::arith {

/// n-th cyclotomic polynomial: x^n - 1 divided exactly by F_d for every proper divisor d of n.
inline IntPolynomial cyclotomic(std::uint64_t n) {
    if (n == 0) throw InvalidArgument("cyclotomic: n must be >= 1");
    static thread_local std::map<std::uint64_t, IntPolynomial> cache;
    if (auto it = cache.find(n); it != cache.end()) return it->second;

    IntPolynomial f = IntPolynomial::monomial(BigInt(1), n) - IntPolynomial(BigInt(1));
    for (std::uint64_t d = 1; d < n; ++d)
        if (n % d == 0) f = exact_div(f, cyclotomic(d));
    cache.emplace(n, f);
    return f;
}

}  // namespace ringspectra::arith
