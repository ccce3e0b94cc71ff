#include <gtest/gtest.h>

#include <sstream>

#include "ringspectra/arith/cyclotomic.hpp"
#include "ringspectra/arith/polynomial.hpp"
#include "ringspectra/constructions/families.hpp"
#include "ringspectra/logic/parser.hpp"
#include "ringspectra/spectra/classify.hpp"
#include "ringspectra/spectra/io.hpp"
#include "ringspectra/spectra/spectrum.hpp"

using namespace ringspectra;
using namespace ringspectra::spectra;

namespace {

Spectrum of(const std::string& text, std::uint64_t bound, std::size_t workers = 1) {
    SpectrumOptions opt;
    opt.workers = workers;
    return spectrum(logic::Sentence(logic::parse(text)), bound, opt);
}

// roots by scanning every residue
bool has_root_scan(const std::vector<long long>& c, std::uint64_t p) {
    const auto P = static_cast<long long>(p);
    for (long long x = 0; x < P; ++x) {
        long long acc = 0;
        for (auto it = c.rbegin(); it != c.rend(); ++it) acc = ((acc * x + *it) % P + P) % P;
        if (acc == 0) return true;
    }
    return false;
}

}  // namespace

TEST(Spectrum, RootSentenceAt100) {
    const Spectrum s = of("E x. x*x + 1 = 0", 100);
    EXPECT_EQ(s.members(), (std::vector<std::uint64_t>{2, 5, 13, 17, 29, 37, 41, 53, 61, 73, 89, 97}));
    for (std::size_t i = 0; i < s.size(); ++i) EXPECT_EQ(s.member(i), has_root_scan({1, 0, 1}, s.prime(i)));
}

TEST(Spectrum, TrivialSentences) {
    const Spectrum all = of("0 = 0", 50);
    EXPECT_EQ(all.count(), 15u);
    EXPECT_EQ(all.count(), all.size());
    EXPECT_EQ(of("!(0 = 0)", 50).count(), 0u);
}

TEST(Spectrum, WorkersDeterministic) {
    const auto s = constructions::congruence_sentence(3, 7);
    SpectrumOptions one, four;
    four.workers = 4;
    EXPECT_EQ(spectrum(s, 3000, one), spectrum(s, 3000, four));
}

TEST(Spectrum, BoundLimits) {
    EXPECT_THROW(of("0 = 0", 1), InvalidArgument);
    EXPECT_THROW(of("0 = 0", kMaxBound + 1), ResourceLimit);
}

TEST(Spectrum, ErrorsCarryThePrime) {
    SpectrumOptions opt;
    opt.engine = eval::Engine::Fast;
    opt.fast.tuple_budget = 10;
    try {
        spectrum(logic::Sentence(logic::parse("E x. E y. E z. TIMES(x, y, z) & !(z = 0)")), 200, opt);
        FAIL() << "expected a resource limit";
    } catch (const ResourceLimit& e) {
        EXPECT_EQ(std::string(e.what()).rfind("in Z_", 0), 0u) << e.what();
    }
}

TEST(PolySpectrum, AgreesWithSentence) {
    const std::vector<std::vector<long long>> polys{{1, 0, 1}, {-2, 0, 1}, {-5, 1}, {1, -1, 1}, {3, 0, 0, 1}};
    for (const auto& c : polys) {
        const arith::IntPolynomial f(std::vector<arith::BigInt>(c.begin(), c.end()));
        const Spectrum a = poly_spectrum(f, 400);
        const Spectrum b = spectrum(constructions::root_sentence(f), 400);
        EXPECT_EQ(a, b) << arith::to_string(f);
    }
}

TEST(PolySpectrum, Examples) {
    EXPECT_EQ(poly_spectrum(arith::int_poly({-2, 0, 1}), 50).members(), (std::vector<std::uint64_t>{2, 7, 17, 23, 31, 41, 47}));
    const Spectrum lin = poly_spectrum(arith::int_poly({-5, 1}), 30);
    EXPECT_EQ(lin.count(), lin.size());
    EXPECT_THROW(poly_spectrum(arith::int_poly({7}), 30), InvalidArgument);
}

TEST(Algebra, ComplementIntersection) {
    const Spectrum f = poly_spectrum(arith::int_poly({1, 0, 1}), 10000);
    const Spectrum g = poly_spectrum(arith::int_poly({-2, 0, 1}), 10000);
    const auto rep = almost_equal(~g & f, congruence_spectrum(5, 8, 10000));
    for (auto p : rep.exceptions) EXPECT_EQ(p, 2u);
    EXPECT_EQ((~g & f) - congruence_spectrum(5, 8, 10000), Spectrum(f.table(), 10000));

    EXPECT_EQ((f | ~f).count(), f.size());
    EXPECT_EQ((f & ~f).count(), 0u);
    EXPECT_EQ(unite(f, g), f | g);
    EXPECT_EQ(intersect(f, g), f & g);
    EXPECT_EQ(complement(f), ~f);
    EXPECT_THROW(f | Spectrum(5000), InvalidArgument);
}

TEST(AlmostEqual, Examples) {
    const Spectrum f = poly_spectrum(arith::int_poly({1, 0, 1}), 10000);
    const auto rep = almost_equal(f, congruence_spectrum(1, 4, 10000));
    EXPECT_EQ(rep.exceptions, (std::vector<std::uint64_t>{2}));
    EXPECT_TRUE(rep.plausibly_equal);
    EXPECT_TRUE(almost_equal(f, f).exceptions.empty());

    const Spectrum f6 = poly_spectrum(arith::cyclotomic(6), 10000);
    const auto r6 = almost_equal(f6, congruence_spectrum(1, 6, 10000));
    for (auto p : r6.exceptions) EXPECT_TRUE(p == 2 || p == 3) << p;
    EXPECT_TRUE(r6.plausibly_equal);

    const auto far = almost_equal(f, congruence_spectrum(3, 4, 10000));
    EXPECT_FALSE(far.plausibly_equal);
}

TEST(Lagarias, Membership) {
    EXPECT_TRUE(lagarias_in_B(5, 8));
    EXPECT_FALSE(lagarias_in_B(2, 5));
    for (std::uint64_t d = 2; d < 40; ++d) EXPECT_TRUE(lagarias_in_B(1, d));
    EXPECT_THROW(lagarias_in_B(8, 8), InvalidArgument);
    EXPECT_THROW(lagarias_in_B(0, 8), InvalidArgument);
}

TEST(Lagarias, ExceptionalModuli) {
    EXPECT_EQ(exceptional_moduli(30), (std::vector<std::uint64_t>{1, 2, 3, 4, 6, 8, 12, 24}));
    EXPECT_EQ(exceptional_moduli(5), (std::vector<std::uint64_t>{1, 2, 3, 4}));
    // every unit squares to 1: brute force over d
    std::vector<std::uint64_t> brute;
    for (std::uint64_t d = 1; d <= 200; ++d) {
        bool ok = true;
        for (std::uint64_t a = 1; a < d && ok; ++a)
            if (std::gcd(a, d) == 1 && a * a % d != 1) ok = false;
        if (ok) brute.push_back(d);
    }
    EXPECT_EQ(exceptional_moduli(200), brute);
}

TEST(Classify, RootSpectrum) {
    const Spectrum f = poly_spectrum(arith::int_poly({1, 0, 1}), 10000);
    const auto fits = fit_congruences(f, 8);
    std::map<std::uint64_t, std::vector<std::uint64_t>> got;
    for (const auto& fit : fits) got[fit.cls.modulus] = fit.cls.residues;
    ASSERT_TRUE(got.count(4));
    ASSERT_TRUE(got.count(8));
    EXPECT_EQ(got[4], (std::vector<std::uint64_t>{1}));
    EXPECT_EQ(got[8], (std::vector<std::uint64_t>{1, 5}));
}

TEST(Classify, AllPrimesGivesAllUnits) {
    const Spectrum all = Spectrum::from_predicate(5000, [](std::uint64_t) { return true; });
    for (const auto& fit : fit_congruences(all, 12)) {
        std::vector<std::uint64_t> units;
        for (std::uint64_t a = 0; a < fit.cls.modulus; ++a)
            if (std::gcd(a, fit.cls.modulus) == 1) units.push_back(a);
        EXPECT_EQ(fit.cls.residues, units) << fit.cls.modulus;
    }
}

TEST(Classify, IntervalSpectrumHasNoFit) {
    // primes in (19^2, 19^3) up to 2000, the pattern of psi for q = 19
    const Spectrum s = Spectrum::from_predicate(2000, [](std::uint64_t p) { return 361 < p && p < 6859; });
    EXPECT_TRUE(fit_congruences(s, 12).empty());
}

TEST(Classify, PowerResidueCount) {
    EXPECT_EQ(power_residue_count(13, 3), 4u);
    EXPECT_EQ(power_residue_count(13, 5), 12u);
    for (std::uint64_t p : {2ULL, 3ULL, 101ULL}) EXPECT_EQ(power_residue_count(p, 1), p - 1);
    EXPECT_THROW(power_residue_count(12, 2), InvalidArgument);
}

TEST(Io, CsvRoundTrip) {
    const Spectrum s = poly_spectrum(arith::int_poly({-2, 0, 1}), 300);
    std::stringstream ss;
    write_csv(ss, s);
    const std::string text = ss.str();
    EXPECT_EQ(text.rfind("prime,member\n2,1\n3,0\n", 0), 0u);
    std::istringstream in(text);
    const Spectrum back = read_spectrum(in);
    EXPECT_EQ(back.members(), s.members());
    EXPECT_EQ(back.bound(), 293u);
}

TEST(Io, JsonRoundTrip) {
    const Spectrum s = poly_spectrum(arith::int_poly({1, 0, 1}), 300);
    const auto j = to_json(s);
    EXPECT_EQ(j["schema"], "ringspectra.spectrum/1");
    std::istringstream in(j.dump());
    EXPECT_EQ(read_spectrum(in), s);
}

TEST(Io, RejectsBadCsv) {
    std::istringstream missing("prime,member\n2,1\n5,0\n");
    EXPECT_ANY_THROW(read_spectrum(missing));
    std::istringstream flag("prime,member\n2,7\n");
    EXPECT_ANY_THROW(read_spectrum(flag));
}
