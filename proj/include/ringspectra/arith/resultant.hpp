#pragma once

#include <cstdint>
#include <utility>

#include "ringspectra/arith/polynomial.hpp"

namespace ringspectra::arith {

/// Res(a, b) over an integral domain R, by the subresultant pseudo-remainder sequence.
/// Every division is exact in R, so no fractions appear.
template <CommutativeRing R>
R resultant(Polynomial<R> a, Polynomial<R> b) {
    if (a.is_zero() || b.is_zero()) return R(0);
    if (a.degree() == 0) return pow(a.leading(), static_cast<unsigned>(b.degree()));
    if (b.degree() == 0) return pow(b.leading(), static_cast<unsigned>(a.degree()));

    R sign(1);
    if (a.degree() < b.degree()) {
        if ((a.degree() % 2 == 1) && (b.degree() % 2 == 1)) sign = -sign;
        std::swap(a, b);
    }

    R g(1), h(1);
    while (b.degree() > 0) {
        const unsigned delta = static_cast<unsigned>(a.degree() - b.degree());
        if ((a.degree() % 2 == 1) && (b.degree() % 2 == 1)) sign = -sign;
        Polynomial<R> r = pseudo_remainder(a, b);
        a = std::move(b);
        if (r.is_zero()) return R(0);
        R divisor = g * pow(h, delta);
        std::vector<R> reduced;
        for (const R& c : r.coeffs()) reduced.push_back(exact_div(c, divisor));
        b = Polynomial<R>(std::move(reduced));
        g = a.leading();
        // h <- g^delta / h^(delta - 1)
        if (delta == 0) {
            // unchanged
        } else {
            h = exact_div(pow(g, delta), pow(h, delta - 1));
        }
    }
    const unsigned da = static_cast<unsigned>(a.degree());
    R last = exact_div(pow(b.leading(), da), pow(h, da - 1));
    return sign * last;
}

/// Polynomial in x vanishing at a1 + k*a2 for every root a1 of f1 and a2 of f2:
/// the resultant in y of f1(y) and f2(x - k*y).
inline IntPolynomial composite_poly(const IntPolynomial& f1, const IntPolynomial& f2, long long k = 1) {
    if (f1.is_constant() || f2.is_constant())
        throw InvalidArgument("composite_poly: both polynomials must be nonconstant");
    using Bivariate = Polynomial<IntPolynomial>;

    std::vector<IntPolynomial> lifted;
    for (const BigInt& c : f1.coeffs()) lifted.emplace_back(c);
    Bivariate a(std::move(lifted));

    // x - k*y as a polynomial in y with coefficients in Z[x]
    Bivariate inner(std::vector<IntPolynomial>{IntPolynomial::x(), IntPolynomial(BigInt(-k))});
    Bivariate b;
    for (auto it = f2.coeffs().rbegin(); it != f2.coeffs().rend(); ++it) b = b * inner + Bivariate(IntPolynomial(*it));

    return resultant(std::move(a), std::move(b));
}

}  // namespace ringspectra::arith
