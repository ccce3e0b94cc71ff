#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "ringspectra/error.hpp"

namespace ringspectra::arith {

/// All primes up to a bound, with pi(x) queries for x <= bound.
class PrimeTable {
public:
    explicit PrimeTable(std::uint64_t bound) : bound_(bound) {
        if (bound < 2) throw InvalidArgument("sieve bound must be >= 2, got " + std::to_string(bound));
        std::vector<bool> composite(bound + 1, false);
        for (std::uint64_t i = 2; i * i <= bound; ++i) {
            if (composite[i]) continue;
            for (std::uint64_t j = i * i; j <= bound; j += i) composite[j] = true;
        }
        for (std::uint64_t i = 2; i <= bound; ++i)
            if (!composite[i]) primes_.push_back(i);
        // one cumulative count per 64-number block; pi(x) adds a short scan
        block_counts_.reserve(bound / 64 + 2);
        std::size_t idx = 0;
        for (std::uint64_t start = 0; start <= bound; start += 64) {
            while (idx < primes_.size() && primes_[idx] < start) ++idx;
            block_counts_.push_back(static_cast<std::uint32_t>(idx));
        }
    }

    std::uint64_t bound() const noexcept { return bound_; }
    std::span<const std::uint64_t> primes() const noexcept { return primes_; }
    std::size_t size() const noexcept { return primes_.size(); }
    std::uint64_t operator[](std::size_t i) const { return primes_[i]; }

    /// Number of primes <= x. Refuses x beyond the sieve bound.
    std::uint64_t pi(std::uint64_t x) const {
        if (x > bound_)
            throw ResourceLimit("pi(" + std::to_string(x) + ") requested beyond sieve bound " +
                                std::to_string(bound_));
        std::size_t idx = block_counts_[x / 64];
        while (idx < primes_.size() && primes_[idx] <= x) ++idx;
        return idx;
    }

    bool is_prime(std::uint64_t n) const {
        if (n > bound_) throw ResourceLimit("primality of " + std::to_string(n) + " beyond sieve bound");
        return std::binary_search(primes_.begin(), primes_.end(), n);
    }

    /// Position of prime p in the table, or size() if p is not a listed prime.
    std::size_t index_of(std::uint64_t p) const {
        auto it = std::lower_bound(primes_.begin(), primes_.end(), p);
        if (it == primes_.end() || *it != p) return primes_.size();
        return static_cast<std::size_t>(it - primes_.begin());
    }

private:
    std::uint64_t bound_;
    std::vector<std::uint64_t> primes_;
    std::vector<std::uint32_t> block_counts_;
};

inline std::shared_ptr<const PrimeTable> sieve(std::uint64_t bound) {
    return std::make_shared<const PrimeTable>(bound);
}

/// Deterministic trial-division primality, for small n and cross-checks.
inline bool is_prime_trial(std::uint64_t n) {
    if (n < 2) return false;
    if (n % 2 == 0) return n == 2;
    for (std::uint64_t d = 3; d * d <= n; d += 2)
        if (n % d == 0) return false;
    return true;
}

}  // namespace ringspectra::arith
