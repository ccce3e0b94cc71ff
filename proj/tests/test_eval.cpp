#include <gtest/gtest.h>

#include <set>
#include <tuple>

#include "ringspectra/constructions/families.hpp"
#include "ringspectra/eval/engine.hpp"
#include "ringspectra/logic/parser.hpp"
#include "ringspectra/logic/random.hpp"

using namespace ringspectra;
using namespace ringspectra::eval;
using logic::parse;

namespace {

bool both(std::uint64_t m, const std::string& text) {
    const RingContext ctx(m);
    const logic::Sentence s(parse(text));
    const bool a = eval_naive(ctx, s.formula());
    const bool b = FastEvaluator(s.formula()).holds(ctx);
    EXPECT_EQ(a, b) << "Z_" << m << ": " << text;
    return a;
}

std::set<std::uint64_t> unary(const Relation& r) {
    std::set<std::uint64_t> out;
    for (std::size_t i = 0; i < r.size(); ++i) out.insert(r.row(i)[0]);
    return out;
}

}  // namespace

TEST(Naive, RootExamples) {
    EXPECT_TRUE(both(5, "E x. x*x + 1 = 0"));
    EXPECT_FALSE(both(7, "E x. x*x + 1 = 0"));
    EXPECT_TRUE(both(7, "M y. y < 4"));
}

TEST(Naive, ModExistsOnFullUniverse) {
    for (std::uint64_t m = 1; m <= 60; ++m)
        for (std::uint64_t q = 2; q <= 8; ++q) {
            int hits = 0;
            for (std::uint64_t r = 0; r < q; ++r) {
                const std::string text = "E[" + std::to_string(r) + "," + std::to_string(q) + "] x. x = x";
                const bool v = both(m, text);
                hits += v;
                if (v) {
                    EXPECT_EQ(r, m % q) << m << " " << q;
                }
            }
            EXPECT_EQ(hits, 1) << m << " " << q;
        }
}

TEST(Naive, MajorityIsStrict) {
    EXPECT_FALSE(both(4, "M y. y < 2"));
    EXPECT_TRUE(both(5, "M y. y < 3"));
    EXPECT_FALSE(both(2, "M y. y = 0"));
    EXPECT_TRUE(both(1, "M y. y = 0"));
}

TEST(Naive, CountGeMonotone) {
    for (std::uint64_t m : {5ULL, 9ULL, 12ULL})
        for (const char* body : {"x < 3", "x*x = 1", "E y. x*y = 1"}) {
            bool prev = true;
            for (std::uint64_t i = 0; i < m; ++i) {
                const bool v = both(m, "C>=(" + std::to_string(i) + ") x. " + body);
                if (!prev) {
                    EXPECT_FALSE(v) << m << " " << body << " " << i;
                }
                prev = v;
            }
        }
}

TEST(Naive, CountComparesTrueCount) {
    // five witnesses in Z_5, index 4 is the largest residue
    EXPECT_TRUE(both(5, "C>=(4) y. y = y"));
    EXPECT_TRUE(both(5, "A i. C>=(i) y. y = y"));
    // exact count 5 is never a residue
    EXPECT_FALSE(both(5, "E i. C=(i) y. y = y"));
    EXPECT_TRUE(both(5, "C=(2) y. y < 2"));
}

TEST(Naive, UnboundVariable) {
    EXPECT_THROW(eval_naive(RingContext(5), parse("x = 1")), EvalError);
    EXPECT_TRUE(eval_naive(RingContext(5), parse("x = 1"), {{"x", 1}}));
    EXPECT_THROW(eval_naive(RingContext(5), parse("x = 1"), {{"x", 6}}), EvalError);
}

TEST(Naive, TrivialRing) {
    EXPECT_FALSE(both(1, "E x. x < x"));
    EXPECT_TRUE(both(1, "A x. x = 0"));
    EXPECT_TRUE(both(1, "1 = 0"));
}

TEST(Fast, TimesRelationAgainstTripleLoop) {
    const RingContext ctx(100);
    const Relation r = eval_fast(ctx, parse("TIMES(x, y, z)"));
    std::set<std::tuple<Residue, Residue, Residue>> want;
    for (Residue x = 0; x < 100; ++x)
        for (Residue y = 0; y < 100; ++y)
            for (Residue z = 0; z < 100; ++z)
                if (static_cast<std::uint64_t>(x) * y == z) want.emplace(x, y, z);
    ASSERT_EQ(r.arity(), 3u);
    const auto& c = r.columns();
    const int ix = r.column_index("x"), iy = r.column_index("y"), iz = r.column_index("z");
    ASSERT_TRUE(ix >= 0 && iy >= 0 && iz >= 0) << c[0];
    std::set<std::tuple<Residue, Residue, Residue>> got;
    for (std::size_t i = 0; i < r.size(); ++i) got.emplace(r.row(i)[ix], r.row(i)[iy], r.row(i)[iz]);
    EXPECT_EQ(r.size(), want.size());
    EXPECT_EQ(got, want);
}

TEST(Fast, ExpThreeIn101) {
    const auto fam = constructions::exp_family(3);
    const RingContext ctx(101);
    EXPECT_EQ(unary(eval_fast(ctx, fam.exp_q)), (std::set<std::uint64_t>{1, 3, 9, 27, 81}));
    EXPECT_EQ(unary(satisfying(ctx, fam.exp_q, Engine::Naive)), (std::set<std::uint64_t>{1, 3, 9, 27, 81}));
}

TEST(Fast, FullUnaryRelation) {
    for (std::uint64_t m : {1ULL, 2ULL, 17ULL}) {
        const Relation r = eval_fast(RingContext(m), parse("x = x"));
        EXPECT_EQ(r.size(), m);
    }
}

TEST(Fast, BudgetNamesSubformula) {
    FastOptions opt;
    opt.tuple_budget = 10;
    try {
        eval_fast(RingContext(30), parse("E x. E y. E z. TIMES(x, y, z) & !(z = 0)"), opt);
        FAIL() << "expected a resource limit";
    } catch (const ResourceLimit& e) {
        EXPECT_NE(std::string(e.what()).find("subformula"), std::string::npos) << e.what();
    }
}

TEST(Sentence, PrimeSentence) {
    const auto s = constructions::prime_sentence();
    EXPECT_TRUE(eval_sentence(RingContext(5), s, Engine::Both));
    EXPECT_FALSE(eval_sentence(RingContext(6), s, Engine::Both));
}

TEST(Sentence, EngineParsing) {
    EXPECT_EQ(parse_engine("both"), Engine::Both);
    EXPECT_THROW(parse_engine("quick"), InvalidArgument);
}

TEST(Equivalence, RandomSentences) {
    logic::RandomFormulaGenerator gen(2024);
    for (int i = 0; i < 150; ++i) {
        const logic::Sentence s(gen.sentence());
        const FastEvaluator fast(s.formula());
        for (std::uint64_t m = 1; m <= 40; m += (i % 3) + 1) {
            const RingContext ctx(m);
            ASSERT_EQ(eval_naive(ctx, s.formula()), fast.holds(ctx)) << "Z_" << m << ": " << logic::to_string(s.formula());
        }
    }
}

TEST(Equivalence, SatisfyingSets) {
    logic::RandomFormulaGenerator gen(99);
    for (int i = 0; i < 100; ++i) {
        const logic::Formula f = gen.formula();
        for (std::uint64_t m : {1ULL, 4ULL, 7ULL, 12ULL}) {
            const RingContext ctx(m);
            EXPECT_EQ(satisfying(ctx, f, Engine::Naive), satisfying(ctx, f, Engine::Fast)) << logic::to_string(f);
        }
    }
}
