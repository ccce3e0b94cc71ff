#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "ringspectra/arith/primes.hpp"
#include "ringspectra/density/functions.hpp"
#include "ringspectra/density/sequence.hpp"
#include "ringspectra/error.hpp"
#include "ringspectra/spectra/spectrum.hpp"

namespace ringspectra::density {

using spectra::Spectrum;

/// h(pi_S)/h(pi), taken as 1 when S holds every prime so far and 0 when it holds none.
inline double h_ratio(const DensityFunction& h, std::uint64_t pi_s, std::uint64_t pi) {
    if (pi_s == pi) return 1.0;
    if (pi_s == 0) return 0.0;
    return h(static_cast<double>(pi_s)) / h(static_cast<double>(pi));
}

struct DensityProfile {
    std::string h;
    std::vector<std::uint64_t> samples;
    std::vector<std::uint64_t> pi_s;
    std::vector<std::uint64_t> pi;
    std::vector<double> ratios;
    /// inf and sup of the ratios over the largest quarter of the samples
    double tail_inf = 0;
    double tail_sup = 0;
};

inline DensityProfile density_profile(const Spectrum& s, const DensityFunction& h, std::vector<std::uint64_t> samples) {
    std::sort(samples.begin(), samples.end());
    samples.erase(std::unique(samples.begin(), samples.end()), samples.end());
    DensityProfile prof;
    prof.h = h.name();
    for (std::uint64_t n : samples) {
        if (n > s.bound())
            throw InvalidArgument("sample " + std::to_string(n) + " beyond spectrum bound " + std::to_string(s.bound()));
        const std::uint64_t ps = s.count_upto(n);
        const std::uint64_t p = n < 2 ? 0 : s.table()->pi(n);
        prof.samples.push_back(n);
        prof.pi_s.push_back(ps);
        prof.pi.push_back(p);
        prof.ratios.push_back(h_ratio(h, ps, p));
    }
    if (!prof.ratios.empty()) {
        const std::size_t tail = (prof.ratios.size() + 3) / 4;
        const auto first = prof.ratios.end() - static_cast<std::ptrdiff_t>(tail);
        prof.tail_inf = *std::min_element(first, prof.ratios.end());
        prof.tail_sup = *std::max_element(first, prof.ratios.end());
    }
    return prof;
}

/// The bracket x/(2 log x) < pi(x) < 3x/(2 log x).
inline std::pair<double, double> pnt_bracket(double x) {
    const double v = x / std::log(x);
    return {0.5 * v, 1.5 * v};
}

struct PntReport {
    bool holds = true;
    std::uint64_t checked = 0;
    std::optional<std::uint64_t> first_violation;
};

/// Checks the bracket at every integer x in [from, bound]; pi is a step
/// function, so this covers every real x in the range.
inline PntReport pnt_bounds_report(const arith::PrimeTable& table, std::uint64_t from = 17) {
    if (from < 2) throw InvalidArgument("pnt_bounds_check: from must be >= 2");
    PntReport r;
    std::uint64_t pi = from > table.bound() ? 0 : table.pi(from - 1);
    std::size_t next = static_cast<std::size_t>(pi);
    for (std::uint64_t x = from; x <= table.bound(); ++x) {
        while (next < table.size() && table[next] <= x) ++next, ++pi;
        const auto [lo, hi] = pnt_bracket(static_cast<double>(x));
        ++r.checked;
        const double v = static_cast<double>(pi);
        if (!(lo < v && v < hi)) {
            r.holds = false;
            r.first_violation = x;
            break;
        }
    }
    return r;
}

inline bool pnt_bounds_check(const arith::PrimeTable& table, std::uint64_t from = 17) {
    return pnt_bounds_report(table, from).holds;
}

struct SemiAdditiveViolation {
    double x = 0, y = 0;
    /// "sum": h(x+y) > h(x)+h(y); "difference": h(x-y) < h(x)-h(y)
    std::string kind;
};

/// Grid pairs breaking h(x+y) <= h(x)+h(y) for x >= y > M, or
/// h(x-y) >= h(x)-h(y) for x > 2y > 2M.
inline std::vector<SemiAdditiveViolation> semi_additive_check(const DensityFunction& h, double m, std::vector<double> grid) {
    std::sort(grid.begin(), grid.end());
    std::vector<SemiAdditiveViolation> out;
    auto tol = [](double a, double b) { return 1e-12 * std::max({1.0, std::abs(a), std::abs(b)}); };
    for (double x : grid) {
        for (double y : grid) {
            if (y <= m || y > x) continue;
            const double lhs = h(x + y), rhs = h(x) + h(y);
            if (lhs > rhs + tol(lhs, rhs)) out.push_back({x, y, "sum"});
            if (x > 2 * y) {
                const double d = h(x - y), e = h(x) - h(y);
                if (d < e - tol(d, e)) out.push_back({x, y, "difference"});
            }
        }
    }
    return out;
}

namespace detail {

inline std::uint64_t pi_checked(const arith::PrimeTable& table, std::uint64_t x) {
    if (x > table.bound())
        throw ResourceLimit("term " + std::to_string(x) + " beyond sieve bound " + std::to_string(table.bound()));
    return table.pi(x);
}

inline std::uint64_t materialized(const Sequence& seq, std::size_t n) {
    auto t = seq.term(n);
    if (!t) throw ResourceLimit("term s_" + std::to_string(n) + " of " + seq.describe() + " exceeds 64 bits");
    return *t;
}

}  // namespace detail

struct ThinRow {
    std::size_t n = 0;
    double lhs = 0;  // r h(pi(s_n))
    double rhs = 0;  // h(pi(s_{n+1}))
    bool holds = false;
};

struct ThinReport {
    double r = 0;
    std::vector<ThinRow> rows;
    bool holds = true;
    bool surrogate = false;
};

/// r h(pi(s_n)) < h(pi(s_{n+1})) for every consecutive pair with n > skip.
inline ThinReport h_thin_report(const Sequence& seq, const DensityFunction& h, double r, const arith::PrimeTable& table,
                                std::size_t skip = 0) {
    if (!(r > 3)) throw InvalidArgument("h-thinness needs r > 3, got " + std::to_string(r));
    ThinReport rep;
    rep.r = r;
    for (std::size_t n = skip + 1; n < seq.kmax(); ++n) {
        const double a = static_cast<double>(detail::pi_checked(table, detail::materialized(seq, n)));
        const double b = static_cast<double>(detail::pi_checked(table, detail::materialized(seq, n + 1)));
        ThinRow row{n, r * h(a), h(b), false};
        row.holds = row.lhs < row.rhs;
        rep.holds = rep.holds && row.holds;
        rep.rows.push_back(row);
    }
    return rep;
}

inline bool is_h_thin(const Sequence& seq, const DensityFunction& h, double r, const arith::PrimeTable& table,
                      std::size_t skip = 0) {
    return h_thin_report(seq, h, r, table, skip).holds;
}

/// log-thinness of s_n = q^(q^n) from the bracket alone, in log space:
/// r log(3/2 s_n / log s_n) < log(1/2 s_{n+1} / log s_{n+1}). A surrogate for
/// terms far beyond any sieve; no prime is counted.
inline ThinReport log_thin_surrogate(const Sequence& seq, double r, std::size_t skip = 1) {
    if (!(r > 3)) throw InvalidArgument("h-thinness needs r > 3, got " + std::to_string(r));
    ThinReport rep;
    rep.r = r;
    rep.surrogate = true;
    for (std::size_t n = skip + 1; n < seq.kmax(); ++n) {
        const double la = seq.log_term(n), lb = seq.log_term(n + 1);
        ThinRow row{n, r * (std::log(1.5) + la - std::log(la)), std::log(0.5) + lb - std::log(lb), false};
        row.holds = row.lhs < row.rhs;
        rep.holds = rep.holds && row.holds;
        rep.rows.push_back(row);
    }
    return rep;
}

struct LauxReport {
    double big_r = 0;
    double r = 0;
    bool premise = true;
    bool conclusion = true;
    std::vector<std::size_t> premise_failures;
    std::vector<std::size_t> conclusion_failures;
};

/// Premise R s_n < s_{n+1} and conclusion (R/6) pi(s_n) < pi(s_{n+1}) on
/// consecutive materialized terms with n > skip.
inline LauxReport laux_check(const Sequence& seq, double big_r, const arith::PrimeTable& table, std::size_t skip = 0) {
    if (!(big_r > 18)) throw InvalidArgument("laux_check needs R > 18, got " + std::to_string(big_r));
    LauxReport rep;
    rep.big_r = big_r;
    rep.r = big_r / 6;
    for (std::size_t n = skip + 1; n < seq.kmax(); ++n) {
        const std::uint64_t a = detail::materialized(seq, n), b = detail::materialized(seq, n + 1);
        if (!(big_r * static_cast<double>(a) < static_cast<double>(b))) {
            rep.premise = false;
            rep.premise_failures.push_back(n);
        }
        const double pa = static_cast<double>(detail::pi_checked(table, a));
        const double pb = static_cast<double>(detail::pi_checked(table, b));
        if (!(rep.r * pa < pb)) {
            rep.conclusion = false;
            rep.conclusion_failures.push_back(n);
        }
    }
    return rep;
}

/// Primes p <= bound in some open interval (s_2n, s_2n+1), n >= 1. Generated
/// sequences are followed past kmax until their terms exceed the bound.
inline Spectrum alternating_set(const Sequence& seq, std::uint64_t bound) {
    std::vector<std::pair<std::uint64_t, std::uint64_t>> intervals;
    for (std::size_t n = 2;; n += 2) {
        const auto lo = seq.kind() == Sequence::Kind::Explicit ? seq.term(n) : seq.generate(n);
        if (!lo || *lo >= bound) break;
        const auto hi = seq.kind() == Sequence::Kind::Explicit ? seq.term(n + 1) : seq.generate(n + 1);
        intervals.emplace_back(*lo, hi ? *hi : std::numeric_limits<std::uint64_t>::max());
        if (!hi) break;
    }
    return Spectrum::from_predicate(bound, [&](std::uint64_t p) {
        for (const auto& [lo, hi] : intervals)
            if (lo < p && p < hi) return true;
        return false;
    });
}

struct OscillationRow {
    std::size_t n = 0;
    std::uint64_t s_n = 0;
    double ratio = 0;
};

struct OscillationReport {
    std::vector<OscillationRow> rows;
    /// max ratio at even indices, min ratio at odd indices
    std::optional<double> even_max;
    std::optional<double> odd_min;
};

/// h-ratio of S exactly at s_n for min_index <= n <= kmax, s_n <= bound.
inline OscillationReport oscillation_report(const Spectrum& s, const DensityFunction& h, const Sequence& seq,
                                            std::size_t min_index = 3) {
    OscillationReport rep;
    for (std::size_t n = std::max<std::size_t>(min_index, 1); n <= seq.kmax(); ++n) {
        const auto t = seq.term(n);
        if (!t || *t > s.bound()) break;
        const double ratio = h_ratio(h, s.count_upto(*t), *t < 2 ? 0 : s.table()->pi(*t));
        rep.rows.push_back({n, *t, ratio});
        auto& slot = n % 2 == 0 ? rep.even_max : rep.odd_min;
        if (!slot) slot = ratio;
        else slot = n % 2 == 0 ? std::max(*slot, ratio) : std::min(*slot, ratio);
    }
    return rep;
}

/// Primes p <= bound with p = a^2 + b^4, a, b >= 0.
inline Spectrum fi_spectrum(std::uint64_t bound) {
    Spectrum s(bound);
    std::vector<std::uint8_t> hit(bound + 1, 0);
    for (std::uint64_t b = 0; b * b * b * b <= bound; ++b) {
        const std::uint64_t b4 = b * b * b * b;
        for (std::uint64_t a = 0; a * a <= bound - b4; ++a) hit[a * a + b4] = 1;
    }
    for (std::size_t i = 0; i < s.size(); ++i) s.set(i, hit[s.prime(i)] != 0);
    return s;
}

}  // namespace ringspectra::density
