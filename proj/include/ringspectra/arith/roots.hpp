#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ringspectra/arith/modular.hpp"
#include "ringspectra/arith/polynomial.hpp"

namespace ringspectra::arith {

/// Coefficients of f reduced into [0, p), trailing zeros removed.
inline std::vector<std::uint64_t> reduce_mod(const IntPolynomial& f, std::uint64_t p) {
    std::vector<std::uint64_t> v;
    v.reserve(f.coeffs().size());
    const BigInt mod(p);
    for (const BigInt& c : f.coeffs()) {
        BigInt r = c % mod;
        if (r < 0) r += mod;
        v.push_back(static_cast<std::uint64_t>(r));
    }
    while (!v.empty() && v.back() == 0) v.pop_back();
    return v;
}

namespace detail {

// Dense polynomials over F_p; every routine keeps results trimmed.
struct FpPoly {
    std::vector<std::uint64_t> c;

    int degree() const { return static_cast<int>(c.size()) - 1; }
    void trim() {
        while (!c.empty() && c.back() == 0) c.pop_back();
    }
};

inline FpPoly fp_sub(FpPoly a, const FpPoly& b, std::uint64_t p) {
    if (a.c.size() < b.c.size()) a.c.resize(b.c.size(), 0);
    for (std::size_t i = 0; i < b.c.size(); ++i) a.c[i] = (a.c[i] + p - b.c[i]) % p;
    a.trim();
    return a;
}

inline FpPoly fp_mul(const FpPoly& a, const FpPoly& b, std::uint64_t p) {
    if (a.c.empty() || b.c.empty()) return {};
    FpPoly r;
    r.c.assign(a.c.size() + b.c.size() - 1, 0);
    for (std::size_t i = 0; i < a.c.size(); ++i)
        for (std::size_t j = 0; j < b.c.size(); ++j) r.c[i + j] = (r.c[i + j] + mulmod(a.c[i], b.c[j], p)) % p;
    r.trim();
    return r;
}

/// Remainder and quotient of a by nonzero b.
inline std::pair<FpPoly, FpPoly> fp_divmod(FpPoly a, const FpPoly& b, std::uint64_t p) {
    FpPoly q;
    if (a.degree() < b.degree()) return {q, a};
    q.c.assign(static_cast<std::size_t>(a.degree() - b.degree() + 1), 0);
    const std::uint64_t inv = powmod(b.c.back(), p - 2, p);
    while (!a.c.empty() && a.degree() >= b.degree()) {
        std::size_t shift = static_cast<std::size_t>(a.degree() - b.degree());
        std::uint64_t t = mulmod(a.c.back(), inv, p);
        q.c[shift] = t;
        for (std::size_t i = 0; i < b.c.size(); ++i)
            a.c[i + shift] = (a.c[i + shift] + p - mulmod(t, b.c[i], p)) % p;
        a.trim();
    }
    q.trim();
    return {q, a};
}

inline FpPoly fp_gcd(FpPoly a, FpPoly b, std::uint64_t p) {
    while (!b.c.empty()) {
        FpPoly r = fp_divmod(a, b, p).second;
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.c.empty()) {
        std::uint64_t inv = powmod(a.c.back(), p - 2, p);
        for (auto& x : a.c) x = mulmod(x, inv, p);
    }
    return a;
}

/// base^e mod m over F_p.
inline FpPoly fp_powmod(FpPoly base, std::uint64_t e, const FpPoly& m, std::uint64_t p) {
    FpPoly result{{1}};
    result = fp_divmod(result, m, p).second;
    base = fp_divmod(base, m, p).second;
    while (e > 0) {
        if (e & 1) result = fp_divmod(fp_mul(result, base, p), m, p).second;
        base = fp_divmod(fp_mul(base, base, p), m, p).second;
        e >>= 1;
    }
    return result;
}

/// Roots of a squarefree, fully split g over odd p, by equal-degree splitting.
inline void split_roots(const FpPoly& g, std::uint64_t p, std::vector<std::uint64_t>& out) {
    if (g.degree() <= 0) return;
    if (g.degree() == 1) {
        std::uint64_t inv = powmod(g.c[1], p - 2, p);
        out.push_back((p - mulmod(g.c[0], inv, p)) % p);
        return;
    }
    for (std::uint64_t a = 0; a < p; ++a) {
        FpPoly shift{{a, 1}};
        shift.trim();
        FpPoly h = fp_sub(fp_powmod(shift, (p - 1) / 2, g, p), FpPoly{{1}}, p);
        FpPoly d = fp_gcd(g, h, p);
        if (d.degree() > 0 && d.degree() < g.degree()) {
            split_roots(d, p, out);
            split_roots(fp_divmod(g, d, p).first, p, out);
            return;
        }
    }
}

}  // namespace detail

inline std::uint64_t eval_mod(const std::vector<std::uint64_t>& coeffs, std::uint64_t x, std::uint64_t p) {
    std::uint64_t acc = 0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = (mulmod(acc, x, p) + *it) % p;
    return acc;
}

/// All x in [0, p) with f(x) == 0 mod p, by exhaustive Horner evaluation.
inline std::vector<std::uint64_t> roots_by_scan(const IntPolynomial& f, std::uint64_t p) {
    auto c = reduce_mod(f, p);
    if (c.empty()) throw DegeneratePolynomial("polynomial vanishes identically mod " + std::to_string(p));
    std::vector<std::uint64_t> roots;
    for (std::uint64_t x = 0; x < p; ++x)
        if (eval_mod(c, x, p) == 0) roots.push_back(x);
    return roots;
}

/// Roots through gcd(x^p - x, f) followed by equal-degree splitting.
inline std::vector<std::uint64_t> roots_by_gcd(const IntPolynomial& f, std::uint64_t p) {
    using detail::FpPoly;
    auto c = reduce_mod(f, p);
    if (c.empty()) throw DegeneratePolynomial("polynomial vanishes identically mod " + std::to_string(p));
    if (c.size() == 1) return {};
    if (p == 2) return roots_by_scan(f, p);
    FpPoly fp{c};
    FpPoly xp = detail::fp_powmod(FpPoly{{0, 1}}, p, fp, p);
    FpPoly g = detail::fp_gcd(fp, detail::fp_sub(xp, FpPoly{{0, 1}}, p), p);
    std::vector<std::uint64_t> roots;
    detail::split_roots(g, p, roots);
    std::sort(roots.begin(), roots.end());
    return roots;
}

enum class RootMethod { Auto, Scan, Gcd };

inline constexpr std::uint64_t kScanRootLimit = 100000;

inline std::vector<std::uint64_t> poly_roots_mod(const IntPolynomial& f, std::uint64_t p,
                                                 RootMethod method = RootMethod::Auto) {
    if (method == RootMethod::Auto) method = p <= kScanRootLimit ? RootMethod::Scan : RootMethod::Gcd;
    return method == RootMethod::Scan ? roots_by_scan(f, p) : roots_by_gcd(f, p);
}

/// Whether f has a root mod p; degree of gcd(x^p - x, f), no root extraction.
inline bool has_root_mod(const IntPolynomial& f, std::uint64_t p) {
    using detail::FpPoly;
    auto c = reduce_mod(f, p);
    if (c.empty()) throw DegeneratePolynomial("polynomial vanishes identically mod " + std::to_string(p));
    if (c.size() == 1) return false;
    if (c[0] == 0) return true;
    if (p <= 3 || static_cast<std::uint64_t>(c.size()) > p) {
        for (std::uint64_t x = 0; x < p; ++x)
            if (eval_mod(c, x, p) == 0) return true;
        return false;
    }
    FpPoly fp{c};
    FpPoly xp = detail::fp_powmod(FpPoly{{0, 1}}, p, fp, p);
    return detail::fp_gcd(fp, detail::fp_sub(xp, FpPoly{{0, 1}}, p), p).degree() > 0;
}

}  // namespace ringspectra::arith
