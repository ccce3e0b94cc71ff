#include <gtest/gtest.h>

#include "ringspectra/logic/ast.hpp"
#include "ringspectra/logic/parser.hpp"
#include "ringspectra/logic/printer.hpp"
#include "ringspectra/logic/random.hpp"

using namespace ringspectra;
using namespace ringspectra::logic;

TEST(Parse, Examples) {
    EXPECT_EQ(parse("E x. x*x + 1 = 0"), exists("x", eq(Term("x") * Term("x") + Term(1), Term::zero())));
    EXPECT_EQ(parse("E[1,4] z. z = z"), Formula::mod_exists(1, 4, "z", eq("z", "z")));
    EXPECT_EQ(parse("M y. y < 4"), Formula::majority("y", lt("y", 4)));
}

TEST(Parse, PrecedenceAndAssociativity) {
    EXPECT_EQ(parse("x + y * z = 1"), parse("(x + (y * z)) = 1"));
    EXPECT_EQ(parse("x = 1 | y = 1 & z = 1"), parse("(x = 1) | ((y = 1) & (z = 1))"));
    EXPECT_EQ(parse("!x = 1 & y = 2"), parse("(!(x = 1)) & (y = 2)"));
    EXPECT_EQ(parse("x = 1 -> y = 1 -> z = 1"), parse("x = 1 -> (y = 1 -> z = 1)"));
    EXPECT_EQ(parse("TIMES(x, 2, y+1)"), times("x", 2, Term("y") + Term(1)));
}

TEST(Parse, CountingForms) {
    EXPECT_EQ(parse("C>=(i) x. x < z"), Formula::count_ge("i", "x", lt("x", "z")));
    EXPECT_EQ(parse("C=(2) y. y = y"), count_exact(2, "y", eq("y", "y")));
    EXPECT_EQ(parse("# comment\nA x . # trailing\n x = x"), forall("x", eq("x", "x")));
}

TEST(Parse, Errors) {
    try {
        parse("E x.\n  x = ");
        FAIL() << "expected a syntax error";
    } catch (const SyntaxError& e) {
        EXPECT_EQ(e.line(), 2u);
        EXPECT_GE(e.column(), 5u);
    }
    EXPECT_THROW(parse("E[4,4] x. x = x"), SemanticError);
    EXPECT_THROW(parse("E[0,1] x. x = x"), SemanticError);
    EXPECT_THROW(parse("x = = 1"), SyntaxError);
    EXPECT_THROW(parse("E x x = 1"), SyntaxError);
    EXPECT_THROW(parse("TIMES(x, y) "), SyntaxError);
    EXPECT_THROW(parse("C>=(x) x. x = x"), SemanticError);
}

TEST(FreeVars, Examples) {
    EXPECT_EQ(free_vars(eq("x", "y")), (std::set<std::string>{"x", "y"}));
    EXPECT_EQ(free_vars(exists("x", eq("x", "y"))), (std::set<std::string>{"y"}));
    EXPECT_EQ(free_vars(Formula::count_ge("i", "x", lt("x", "z"))), (std::set<std::string>{"i", "z"}));
    EXPECT_TRUE(free_vars(parse("A x. E y. x*y = 1")).empty());
    // shadowing: inner x is bound, outer x free
    EXPECT_EQ(free_vars(eq("x", 0) && exists("x", eq("x", 1))), (std::set<std::string>{"x"}));
}

TEST(CountExact, Desugaring) {
    const Formula phi = lt("y", "z");
    EXPECT_EQ(count_exact("i", "y", phi),
              Formula::count_ge("i", "y", phi) && !Formula::count_ge(Term("i") + Term(1), "y", phi));
    EXPECT_EQ(count_exact(0, "y", phi), Formula::count_ge(0, "y", phi) && !Formula::count_ge(Term(0) + Term(1), "y", phi));
    EXPECT_THROW(count_exact(Term("y") + Term(1), "y", phi), InvalidArgument);
}

TEST(Ast, Invariants) {
    EXPECT_THROW(Formula::mod_exists(3, 3, "x", eq("x", "x")), InvalidArgument);
    EXPECT_THROW(Formula::mod_exists(0, 1, "x", eq("x", "x")), InvalidArgument);
    EXPECT_THROW(Term::var(""), InvalidArgument);
    EXPECT_THROW(Sentence(eq("x", 0)), InvalidArgument);
    EXPECT_NO_THROW(Sentence(parse("E x. x = 0")));
}

TEST(Printer, FullyParenthesized) {
    EXPECT_EQ(to_string(parse("x + y * z = 1")), "(x + (y * z)) = 1");
    EXPECT_EQ(to_string(parse("x = 1 & y = 2 | z = 3")), "((x = 1 & y = 2) | z = 3)");
}

TEST(Printer, CompactForm) {
    EXPECT_EQ(to_text(parse("E x. x*x + 1 = 0")), "E x. x*x + 1 = 0");
    EXPECT_EQ(to_text(parse("(x + y) * z = 1")), "(x + y)*z = 1");
    EXPECT_EQ(to_text(parse("(x = 1 -> y = 1) -> z = 1")), "(x = 1 -> y = 1) -> z = 1");
    EXPECT_EQ(to_text(parse("(E x. x = 1) & y = 2")), "(E x. x = 1) & y = 2");
}

TEST(Printer, RoundTripRandom) {
    RandomFormulaOptions opt;
    opt.max_depth = 6;
    opt.max_quantifier_nesting = 6;
    opt.max_literal = 30;
    RandomFormulaGenerator gen(7, opt);
    for (int i = 0; i < 2000; ++i) {
        const Formula f = gen.formula();
        ASSERT_EQ(parse(to_string(f)), f) << to_string(f);
        ASSERT_EQ(parse(to_text(f)), f) << to_text(f);
    }
}

TEST(Random, SentencesRespectLimits) {
    RandomFormulaGenerator gen(3);
    for (int i = 0; i < 300; ++i) {
        const Formula f = gen.sentence();
        EXPECT_TRUE(free_vars(f).empty());
        EXPECT_LE(formula_depth(f), 5u);
        EXPECT_LE(quantifier_nesting(f), 3u);
    }
    RandomFormulaGenerator a(11), b(11);
    for (int i = 0; i < 50; ++i) EXPECT_EQ(a.sentence(), b.sentence());
}
