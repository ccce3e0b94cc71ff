#include <gtest/gtest.h>

#include <set>
#include <vector>

#include "ringspectra/arith/cyclotomic.hpp"
#include "ringspectra/arith/modular.hpp"
#include "ringspectra/arith/polynomial.hpp"
#include "ringspectra/arith/primes.hpp"
#include "ringspectra/arith/resultant.hpp"
#include "ringspectra/arith/roots.hpp"

using namespace ringspectra;
using namespace ringspectra::arith;

namespace {

// odd-only sieve, written separately from PrimeTable
std::vector<std::uint64_t> odd_sieve(std::uint64_t n) {
    std::vector<bool> comp((n + 1) / 2, false);
    std::vector<std::uint64_t> out{2};
    for (std::uint64_t i = 3; i <= n; i += 2) {
        if (comp[i / 2]) continue;
        out.push_back(i);
        for (std::uint64_t j = i * i; j <= n; j += 2 * i) comp[j / 2] = true;
    }
    return out;
}

std::vector<std::uint64_t> scan_roots(const std::vector<long long>& c, std::uint64_t p) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t x = 0; x < p; ++x) {
        long long acc = 0;
        for (auto it = c.rbegin(); it != c.rend(); ++it)
            acc = ((acc * static_cast<long long>(x) + *it) % static_cast<long long>(p) + static_cast<long long>(p)) %
                  static_cast<long long>(p);
        if (acc == 0) out.push_back(x);
    }
    return out;
}

}  // namespace

TEST(Sieve, SmallBounds) {
    auto t = sieve(10);
    EXPECT_EQ(std::vector<std::uint64_t>(t->primes().begin(), t->primes().end()), (std::vector<std::uint64_t>{2, 3, 5, 7}));
    EXPECT_EQ(t->pi(10), 4u);
    auto two = sieve(2);
    ASSERT_EQ(two->size(), 1u);
    EXPECT_EQ((*two)[0], 2u);
    EXPECT_THROW(sieve(1), InvalidArgument);
    EXPECT_THROW(sieve(0), InvalidArgument);
}

TEST(Sieve, MillionAgainstSecondSieve) {
    auto t = sieve(1000000);
    const auto other = odd_sieve(1000000);
    EXPECT_EQ(t->size(), other.size());
    EXPECT_TRUE(std::equal(other.begin(), other.end(), t->primes().begin()));
    EXPECT_EQ(t->pi(1000000), 78498u);

    std::uint64_t trial = 0;
    for (std::uint64_t n = 2; n <= 10000; ++n) trial += is_prime_trial(n);
    EXPECT_EQ(t->pi(10000), trial);
    EXPECT_EQ(trial, 1229u);
}

TEST(Sieve, PiQueries) {
    auto t = sieve(200000);
    for (std::uint64_t x : {0ULL, 1ULL, 2ULL, 63ULL, 64ULL, 65ULL, 1000ULL, 6859ULL, 130321ULL, 200000ULL}) {
        std::uint64_t c = 0;
        for (auto p : t->primes()) c += p <= x;
        EXPECT_EQ(t->pi(x), c) << x;
    }
    EXPECT_THROW(t->pi(200001), ResourceLimit);
    EXPECT_TRUE(t->is_prime(199999));
    EXPECT_EQ(t->index_of(7), 3u);
    EXPECT_EQ(t->index_of(8), t->size());
}

TEST(Cyclotomic, Examples) {
    EXPECT_EQ(cyclotomic(1), int_poly({-1, 1}));
    EXPECT_EQ(cyclotomic(4), int_poly({1, 0, 1}));
    EXPECT_EQ(cyclotomic(12), int_poly({1, 0, -1, 0, 1}));
    EXPECT_THROW(cyclotomic(0), InvalidArgument);
}

TEST(Cyclotomic, ProductOverDivisors) {
    for (std::uint64_t n = 1; n <= 30; ++n) {
        IntPolynomial prod(BigInt(1));
        for (std::uint64_t d = 1; d <= n; ++d)
            if (n % d == 0) prod *= cyclotomic(d);
        EXPECT_EQ(prod, IntPolynomial::monomial(BigInt(1), n) - IntPolynomial(BigInt(1))) << n;
    }
}

TEST(Cyclotomic, Twelve_LongDivision) {
    // x^12 - 1 divided by F1 F2 F3 F4 F6 = (x^6-1)(x^2+1)
    IntPolynomial num = IntPolynomial::monomial(BigInt(1), 12) - IntPolynomial(BigInt(1));
    IntPolynomial den = (IntPolynomial::monomial(BigInt(1), 6) - IntPolynomial(BigInt(1))) * int_poly({1, 0, 1});
    EXPECT_EQ(exact_div(num, den), int_poly({1, 0, -1, 0, 1}));
}

TEST(Roots, Examples) {
    EXPECT_EQ(poly_roots_mod(int_poly({1, 0, 1}), 5), (std::vector<std::uint64_t>{2, 3}));
    EXPECT_TRUE(poly_roots_mod(int_poly({1, 0, 1}), 7).empty());
    EXPECT_EQ(poly_roots_mod(int_poly({-1, 1}), 11), (std::vector<std::uint64_t>{1}));
}

TEST(Roots, GcdPathMatchesScan) {
    const std::vector<std::vector<long long>> polys{{1, 0, 1}, {-2, 0, 1}, {-2, 0, 0, 1}, {1, 1, 1, 1, 1}};
    const auto table = sieve(1000);
    for (auto p : table->primes()) {
        for (const auto& c : polys) {
            IntPolynomial f(std::vector<BigInt>(c.begin(), c.end()));
            const auto want = scan_roots(c, p);
            EXPECT_EQ(poly_roots_mod(f, p, RootMethod::Scan), want) << p;
            EXPECT_EQ(poly_roots_mod(f, p, RootMethod::Gcd), want) << p;
            EXPECT_EQ(has_root_mod(f, p), !want.empty()) << p;
        }
    }
}

TEST(Roots, Degenerate) {
    EXPECT_THROW(poly_roots_mod(int_poly({2, 2}), 2), DegeneratePolynomial);
    EXPECT_THROW(has_root_mod(int_poly({3, 0, 6}), 3), DegeneratePolynomial);
}

TEST(FracMod, Examples) {
    EXPECT_EQ(frac_mod(1, 4, 5), 4u);
    EXPECT_EQ(frac_mod(3, 4, 5), 2u);
    EXPECT_EQ(frac_mod(6, 6, 13), 1u);
    EXPECT_THROW(frac_mod(1, 7, 7), NoInverse);
}

TEST(FracMod, InvertsMultiplication) {
    for (std::uint64_t p : {5ULL, 7ULL, 101ULL, 9973ULL})
        for (std::uint64_t d = 1; d < 15 && d < p; ++d)
            for (std::uint64_t a = 1; a < 20; ++a) {
                const auto r = frac_mod(a, d, p);
                EXPECT_LT(r, p);
                EXPECT_EQ(r * d % p, a % p);
            }
}

TEST(Composite, SumOfRoots) {
    const IntPolynomial g = composite_poly(int_poly({1, 0, 1}), int_poly({-2, 0, 1}), 1);
    // ((x-i)^2-2)((x+i)^2-2) = (x^2-3)^2 + 4x^2 = x^4 - 2x^2 + 9
    const IntPolynomial want = int_poly({9, 0, -2, 0, 1});
    EXPECT_TRUE(g == want || g == -want) << to_string(g);
}

TEST(Composite, LinearAndCollapsed) {
    const IntPolynomial lin = composite_poly(int_poly({-3, 1}), int_poly({-4, 1}), 1);
    EXPECT_TRUE(lin == int_poly({-7, 1}) || lin == int_poly({7, -1})) << to_string(lin);

    const IntPolynomial sq = int_poly({1, 0, 1}) * int_poly({1, 0, 1});
    const IntPolynomial k0 = composite_poly(int_poly({1, 0, 1}), int_poly({1, 0, 1}), 0);
    EXPECT_TRUE(k0 == sq || k0 == -sq) << to_string(k0);

    EXPECT_THROW(composite_poly(int_poly({5}), int_poly({1, 1})), InvalidArgument);
}

TEST(Composite, SpectrumInsideIntersection) {
    const IntPolynomial f1 = int_poly({1, 0, 1}), f2 = int_poly({-2, 0, 1});
    const IntPolynomial g = composite_poly(f1, f2, 1);
    std::set<std::uint64_t> exceptions;
    const auto table = sieve(10000);
    for (auto p : table->primes()) {
        if (!has_root_mod(g, p)) continue;
        if (p == 2 || p == 3) continue;
        if (!(has_root_mod(f1, p) && has_root_mod(f2, p))) exceptions.insert(p);
    }
    EXPECT_TRUE(exceptions.empty()) << "first exception " << *exceptions.begin();
}

TEST(PolynomialText, RoundTrip) {
    const IntPolynomial f = parse_int_polynomial("3 - x + 0*x^2 +  4*x^5");
    EXPECT_EQ(f, int_poly({3, -1, 0, 0, 0, 4}));
    EXPECT_EQ(parse_int_polynomial(to_string(f)), f);
    EXPECT_EQ(parse_int_polynomial("x^2 + x^2 - 1"), int_poly({-1, 0, 2}));
    EXPECT_THROW(parse_int_polynomial("x^^2"), SyntaxError);
}

TEST(Modular, PowAndGcd) {
    EXPECT_EQ(powmod(2, 10, 1000), 24u);
    EXPECT_EQ(mulmod(1ULL << 62, 4, 1000000007ULL), (((1ULL << 62) % 1000000007ULL) * 4) % 1000000007ULL);
    std::int64_t x = 0, y = 0;
    EXPECT_EQ(ext_gcd(240, 46, x, y), 2);
    EXPECT_EQ(240 * x + 46 * y, 2);
}
