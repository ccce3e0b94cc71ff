#include <gtest/gtest.h>

#include <set>

#include "ringspectra/arith/modular.hpp"
#include "ringspectra/arith/primes.hpp"
#include "ringspectra/constructions/families.hpp"
#include "ringspectra/eval/engine.hpp"
#include "ringspectra/logic/parser.hpp"
#include "ringspectra/logic/printer.hpp"
#include "ringspectra/spectra/spectrum.hpp"

using namespace ringspectra;
using namespace ringspectra::constructions;
using eval::RingContext;

namespace {

bool holds(const logic::Sentence& s, std::uint64_t m) { return eval::eval_sentence(RingContext(m), s, eval::Engine::Both); }

bool holds(const logic::Formula& f, std::uint64_t m) { return holds(logic::Sentence(f), m); }

std::set<std::uint64_t> sat(const logic::Formula& f, std::uint64_t m) {
    const auto r = eval::satisfying(RingContext(m), f, eval::Engine::Fast);
    std::set<std::uint64_t> out;
    for (std::size_t i = 0; i < r.size(); ++i) out.insert(r.row(i)[0]);
    return out;
}

// x*y = z over the integers, with x, y < m
bool divides_in(std::uint64_t x, std::uint64_t z, std::uint64_t m) {
    for (std::uint64_t y = 0; y < m; ++y)
        if (x * y == z) return true;
    return false;
}

// every divisor other than 1 is a multiple of q, read off the definition
bool exp_def(std::uint64_t q, std::uint64_t z, std::uint64_t m) {
    for (std::uint64_t x = 0; x < m; ++x) {
        if (x == 1 || !divides_in(x, z, m)) continue;
        if (!divides_in(q, x, m)) return false;
    }
    return true;
}

std::set<std::uint64_t> supexp_def(std::uint64_t q, std::uint64_t m, bool square) {
    std::set<std::uint64_t> out;
    for (std::uint64_t z = 0; z < m; ++z) {
        if (!exp_def(q, z, m)) continue;
        std::uint64_t i = 0;
        for (std::uint64_t y = 0; y < z; ++y) i += exp_def(q, y, m);
        if (i >= m || !exp_def(q, i, m)) continue;
        if (square) {
            bool sq = false;
            for (std::uint64_t k = 0; k < m && !sq; ++k) sq = k * k == i;
            if (!sq) continue;
        }
        out.insert(z);
    }
    return out;
}

}  // namespace

TEST(FracLt, Examples) {
    EXPECT_TRUE(holds(frac_lt(3, 1, 4), 5));
    EXPECT_FALSE(holds(frac_lt(1, 3, 4), 5));
    for (std::uint64_t p : {5ULL, 7ULL, 11ULL, 13ULL})
        for (std::uint64_t a = 1; a < 4; ++a) EXPECT_FALSE(holds(frac_lt(a, a, 4), p));
    EXPECT_THROW(frac_lt(1, 2, 0), InvalidArgument);
}

TEST(FracLt, MatchesFracMod) {
    for (std::uint64_t p : {7ULL, 11ULL, 13ULL, 29ULL})
        for (std::uint64_t d = 2; d < 6; ++d)
            for (std::uint64_t a = 1; a < d; ++a)
                for (std::uint64_t b = 1; b < d; ++b)
                    EXPECT_EQ(holds(frac_lt(a, b, d), p), arith::frac_mod(a, d, p) < arith::frac_mod(b, d, p))
                        << a << "/" << d << " < " << b << "/" << d << " in Z_" << p;
}

TEST(Congruence, Examples) {
    EXPECT_TRUE(holds(congruence_sentence(1, 4), 5));
    EXPECT_FALSE(holds(congruence_sentence(1, 4), 7));
    EXPECT_THROW(congruence_sentence(4, 4), InvalidArgument);
    EXPECT_THROW(congruence_sentence(0, 4), InvalidArgument);
}

TEST(Congruence, TwoModFiveSpectrum) {
    const auto s = spectra::spectrum(congruence_sentence(2, 5), 10000);
    for (std::size_t i = 0; i < s.size(); ++i)
        if (s.prime(i) > 5) {
            EXPECT_EQ(s.member(i), s.prime(i) % 5 == 2) << s.prime(i);
        }
}

TEST(Congruence, SmallModuliSweep) {
    const auto t = arith::sieve(600);
    for (std::uint64_t d = 2; d <= 7; ++d)
        for (std::uint64_t a = 1; a < d; ++a) {
            const eval::SentenceEvaluator ev(congruence_sentence(a, d));
            for (auto p : t->primes())
                if (p > d) {
                    EXPECT_EQ(ev(RingContext(p)), p % d == a) << a << " " << d << " " << p;
                }
        }
}

TEST(FracMod, MinimumFractionAndOrder) {
    const auto t = arith::sieve(1000);
    for (std::uint64_t d = 2; d <= 12; ++d)
        for (auto p : t->primes()) {
            if (p <= d) continue;
            std::uint64_t best = p, arg = 0;
            for (std::uint64_t i = 1; i < d; ++i) {
                const auto v = arith::frac_mod(i, d, p);
                if (v < best) best = v, arg = i;
            }
            EXPECT_EQ((p + arg) % d, 0u) << d << " " << p;
            for (std::uint64_t a = 1; a < d; ++a)
                EXPECT_EQ(p % d == a, arith::frac_mod(d - a, d, p) == best) << a << " " << d << " " << p;
        }
}

TEST(Cyclotomic, Sentences) {
    EXPECT_EQ(logic::to_text(cyclotomic_sentence(4).formula()), "E x. x*x + 1 = 0");
    EXPECT_TRUE(holds(cyclotomic_sentence(6), 7));
    EXPECT_THROW(cyclotomic_sentence(1), InvalidArgument);
    const auto s = spectra::spectrum(cyclotomic_sentence(4), 2000);
    for (std::size_t i = 0; i < s.size(); ++i)
        if (s.prime(i) % 4 == 1) {
            EXPECT_TRUE(s.member(i)) << s.prime(i);
        }
}

TEST(ModCount, Examples) {
    const auto s = spectra::spectrum(mod_count_sentence(2, 5), 1000);
    for (std::size_t i = 0; i < s.size(); ++i) EXPECT_EQ(s.member(i), s.prime(i) % 5 == 2);
    EXPECT_EQ(spectra::spectrum(mod_count_sentence(0, 2), 1000).members(), (std::vector<std::uint64_t>{2}));
    const auto odd = spectra::spectrum(mod_count_sentence(1, 2), 1000);
    EXPECT_EQ(odd.count(), odd.size() - 1);
    EXPECT_THROW(mod_count_sentence(5, 5), InvalidArgument);
}

TEST(PowerResidue, TwoTwoZero) {
    const auto s = spectra::spectrum(power_residue_sentence(2, 2, 0), 3000);
    for (std::size_t i = 0; i < s.size(); ++i)
        if (s.prime(i) > 4) {
            EXPECT_EQ(s.member(i), s.prime(i) % 4 == 1) << s.prime(i);
        }
    EXPECT_THROW(power_residue_sentence(1, 2, 0), InvalidArgument);
    EXPECT_THROW(power_residue_sentence(2, 2, 2), InvalidArgument);
}

TEST(Prime, SweepMatchesTrialDivision) {
    const eval::SentenceEvaluator ev(prime_sentence());
    EXPECT_TRUE(ev(RingContext(7)));
    EXPECT_FALSE(ev(RingContext(9)));
    for (std::uint64_t m = 2; m <= 500; ++m) EXPECT_EQ(ev(RingContext(m)), arith::is_prime_trial(m)) << m;
}

TEST(Exp, Family) {
    const auto fam = exp_family(3);
    EXPECT_EQ(sat(fam.exp_q, 101), (std::set<std::uint64_t>{1, 3, 9, 27, 81}));
    EXPECT_EQ(sat(fam.exp_q2, 101), (std::set<std::uint64_t>{1, 9, 81}));
    EXPECT_EQ(sat(fam.maxexp_q, 101), (std::set<std::uint64_t>{81}));
    EXPECT_EQ(sat(fam.maxexp_q2, 101), (std::set<std::uint64_t>{81}));
    EXPECT_EQ(sat(fam.exp_q2, 50), (std::set<std::uint64_t>{1, 9}));
    for (std::uint64_t m : {2ULL, 10ULL, 64ULL}) {
        std::set<std::uint64_t> want;
        for (std::uint64_t z = 0; z < m; ++z)
            if (exp_def(3, z, m)) want.insert(z);
        EXPECT_EQ(sat(fam.exp_q, m), want) << m;
    }
    EXPECT_THROW(exp_family(9), InvalidArgument);
}

TEST(Psi, Examples) {
    const auto s = psi_sentence(3);
    EXPECT_TRUE(holds(s, 11));
    EXPECT_FALSE(holds(s, 29));
    const eval::SentenceEvaluator ev(s);
    const auto t = arith::sieve(300);
    for (auto p : t->primes())
        if (p > 3) {
            EXPECT_EQ(ev(RingContext(p)), (9 < p && p < 27) || (81 < p && p < 243)) << p;
        }
    EXPECT_THROW(psi_sentence(4), InvalidArgument);
}

TEST(SupExp, DefinitionSweep) {
    for (std::uint64_t q : {2ULL, 3ULL})
        for (std::uint64_t m : {30ULL, 100ULL, 300ULL}) {
            const auto fam = supexp_family(q);
            EXPECT_EQ(sat(fam.supexp_q, m), supexp_def(q, m, false)) << q << " " << m;
            EXPECT_EQ(sat(fam.supexp_q2, m), supexp_def(q, m, true)) << q << " " << m;
        }
    EXPECT_EQ(sat(supexp_family(3).supexp_q, 30), (std::set<std::uint64_t>{3, 27}));
    EXPECT_EQ(sat(supexp_family(2).supexp_q2, 100), (std::set<std::uint64_t>{2, 16}));
    EXPECT_THROW(supexp_family(6), InvalidArgument);
}

TEST(Theta, RoundTrip) {
    const auto s = theta_sentence(2);
    EXPECT_EQ(logic::parse(logic::to_text(s.formula())), s.formula());
    EXPECT_EQ(logic::parse(logic::to_string(s.formula())), s.formula());
    EXPECT_THROW(theta_sentence(15), InvalidArgument);
}

TEST(Families, ByName) {
    const auto c = build_family("congruence", {{"a", 1}, {"d", 4}});
    EXPECT_EQ(c.min_prime, 4u);
    EXPECT_EQ(c.sentence.formula(), congruence_sentence(1, 4).formula());
    EXPECT_EQ(build_family("prime", {}).sentence.formula(), prime_sentence().formula());
    EXPECT_THROW(build_family("congruence", {{"a", 1}}), InvalidArgument);
    EXPECT_THROW(build_family("lattice", {}), InvalidArgument);
    EXPECT_THROW(build_family("psi", {{"q", 21}}), InvalidArgument);
}
