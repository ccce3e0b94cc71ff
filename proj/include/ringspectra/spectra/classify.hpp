#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "ringspectra/arith/modular.hpp"
#include "ringspectra/arith/primes.hpp"
#include "ringspectra/error.hpp"
#include "ringspectra/spectra/spectrum.hpp"

namespace ringspectra::spectra {

/// {p : p = a (mod d)} lies in the Boolean algebra of polynomial spectra
/// iff a has order 1 or 2 in Z_d or shares a factor with d.
inline bool lagarias_in_B(std::uint64_t a, std::uint64_t d) {
    if (a == 0 || a >= d) throw InvalidArgument("lagarias_in_B: need 0 < a < d, got a=" + std::to_string(a) +
                                                ", d=" + std::to_string(d));
    return arith::mulmod(a, a, d) == 1 % d || std::gcd(a, d) > 1;
}

/// Moduli d <= limit all of whose units square to 1.
inline std::vector<std::uint64_t> exceptional_moduli(std::uint64_t limit) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t d = 1; d <= limit; ++d) {
        bool all = true;
        for (std::uint64_t a = 1; a < d && all; ++a)
            if (std::gcd(a, d) == 1 && arith::mulmod(a, a, d) != 1) all = false;
        if (all) out.push_back(d);
    }
    return out;
}

/// Residues modulo d, each with its unit status.
struct CongruenceClass {
    std::uint64_t modulus = 0;
    std::vector<std::uint64_t> residues;
    std::vector<bool> coprime;

    CongruenceClass() = default;
    CongruenceClass(std::uint64_t d, std::vector<std::uint64_t> rs) : modulus(d), residues(std::move(rs)) {
        if (d < 2) throw InvalidArgument("congruence class modulus must be >= 2");
        if (residues.empty()) throw InvalidArgument("congruence class needs at least one residue");
        std::sort(residues.begin(), residues.end());
        for (std::uint64_t a : residues) {
            if (a == 0 || a >= d) throw InvalidArgument("residue " + std::to_string(a) + " outside 1.." + std::to_string(d - 1));
            coprime.push_back(std::gcd(a, d) == 1);
        }
    }

    bool contains(std::uint64_t p) const { return std::binary_search(residues.begin(), residues.end(), p % modulus); }
};

struct CongruenceFit {
    CongruenceClass cls;
    std::uint64_t threshold = 0;
    /// Members above the threshold outside every detected class.
    std::vector<std::uint64_t> uncovered;
    /// Members at or below the threshold, which the fit ignores.
    std::vector<std::uint64_t> below_threshold;
    /// The detected classes cover S exactly above the threshold.
    bool exact = false;
};

/// For each d in 2..max_modulus, the residues a whose primes above the
/// threshold (default max(d, 50)) all lie in S. Moduli with no such residue
/// are omitted.
inline std::vector<CongruenceFit> fit_congruences(const Spectrum& s, std::uint64_t max_modulus,
                                                  std::optional<std::uint64_t> threshold = std::nullopt) {
    std::vector<CongruenceFit> out;
    for (std::uint64_t d = 2; d <= max_modulus; ++d) {
        const std::uint64_t t = threshold ? *threshold : std::max<std::uint64_t>(d, 50);
        if (t >= s.bound())
            throw InvalidArgument("fit_congruences: threshold " + std::to_string(t) + " must be below the bound " +
                                  std::to_string(s.bound()));
        std::vector<std::uint8_t> seen(d, 0), broken(d, 0);
        for (std::size_t i = 0; i < s.size(); ++i) {
            const std::uint64_t p = s.prime(i);
            if (p <= t) continue;
            seen[p % d] = 1;
            if (!s.member(i)) broken[p % d] = 1;
        }
        std::vector<std::uint64_t> rs;
        for (std::uint64_t a = 1; a < d; ++a)
            if (seen[a] && !broken[a]) rs.push_back(a);
        if (rs.empty()) continue;

        CongruenceFit fit{CongruenceClass(d, rs), t, {}, {}, false};
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (!s.member(i)) continue;
            const std::uint64_t p = s.prime(i);
            if (p <= t) fit.below_threshold.push_back(p);
            else if (!fit.cls.contains(p)) fit.uncovered.push_back(p);
        }
        fit.exact = fit.uncovered.empty();
        out.push_back(std::move(fit));
    }
    return out;
}

/// Number of nonzero n-th powers in Z_p, by enumeration.
inline std::uint64_t power_residue_count(std::uint64_t p, std::uint64_t n) {
    if (!arith::is_prime_trial(p)) throw InvalidArgument("power_residue_count: " + std::to_string(p) + " is not prime");
    std::vector<std::uint8_t> hit(p, 0);
    std::uint64_t count = 0;
    for (std::uint64_t x = 1; x < p; ++x) {
        const std::uint64_t y = arith::powmod(x, n, p);
        if (!hit[y]) {
            hit[y] = 1;
            ++count;
        }
    }
    return count;
}

}  // namespace ringspectra::spectra
