#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "ringspectra/logic/ast.hpp"

namespace ringspectra::logic {

struct RandomFormulaOptions {
    std::size_t max_depth = 5;
    std::size_t max_quantifier_nesting = 3;
    std::uint64_t max_literal = 4;
    std::vector<std::string> vars{"x", "y", "z"};
};

/// Connective and quantifier depth; atoms have depth 1.
inline std::size_t formula_depth(const Formula& f) {
    const FormulaKind k = f.kind();
    if (is_atom(k)) return 1;
    if (is_binary(k)) return 1 + std::max(formula_depth(f.left()), formula_depth(f.right()));
    return 1 + formula_depth(f.left());
}

inline std::size_t quantifier_nesting(const Formula& f) {
    const FormulaKind k = f.kind();
    if (is_atom(k)) return 0;
    if (is_binary(k)) return std::max(quantifier_nesting(f.left()), quantifier_nesting(f.right()));
    return (k == FormulaKind::Not ? 0 : 1) + quantifier_nesting(f.left());
}

/// Seeded generator of well-formed formulas over a small variable pool.
class RandomFormulaGenerator {
public:
    explicit RandomFormulaGenerator(std::uint64_t seed, RandomFormulaOptions opt = {}) : rng_(seed), opt_(std::move(opt)) {}

    /// A formula that may have free variables.
    Formula formula() { return gen(0, 0); }

    /// A closed formula within the depth and nesting limits: free variables are
    /// bound by randomly chosen quantifiers, and oversized draws are redrawn.
    Formula sentence() {
        while (true) {
            Formula f = formula();
            for (const auto& v : free_vars(f)) f = bind(v, f);
            if (formula_depth(f) <= opt_.max_depth && quantifier_nesting(f) <= opt_.max_quantifier_nesting) return f;
        }
    }

    Term term(std::size_t depth = 0) {
        const std::uint64_t roll = pick(8);
        if (depth >= 2 || roll < 4) return Term::var(opt_.vars[pick(opt_.vars.size())]);
        if (roll < 6) return Term::literal(pick(opt_.max_literal + 1));
        Term a = term(depth + 1), b = term(depth + 1);
        return roll == 6 ? a + b : a * b;
    }

private:
    std::uint64_t pick(std::uint64_t n) { return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(rng_); }

    Formula atom() {
        switch (pick(3)) {
            case 0: return Formula::equal(term(), term());
            case 1: return Formula::less(term(), term());
            default: return Formula::times(term(1), term(1), term(1));
        }
    }

    Formula bind(const std::string& v, const Formula& body) {
        switch (pick(4)) {
            case 0: return Formula::exists(v, body);
            case 1: return Formula::forall(v, body);
            case 2: {
                const std::uint64_t q = 2 + pick(3);
                return Formula::mod_exists(pick(q), q, v, body);
            }
            default: return Formula::majority(v, body);
        }
    }

    Formula gen(std::size_t depth, std::size_t nesting) {
        if (depth + 1 >= opt_.max_depth || pick(10) < 3) return atom();
        const bool can_bind = nesting < opt_.max_quantifier_nesting;
        const std::uint64_t roll = pick(can_bind ? 9 : 4);
        switch (roll) {
            case 0: return !gen(depth + 1, nesting);
            case 1: return gen(depth + 1, nesting) && gen(depth + 1, nesting);
            case 2: return gen(depth + 1, nesting) || gen(depth + 1, nesting);
            case 3: return implies(gen(depth + 1, nesting), gen(depth + 1, nesting));
            default: break;
        }
        const std::string v = opt_.vars[pick(opt_.vars.size())];
        Formula body = gen(depth + 1, nesting + 1);
        switch (roll) {
            case 4: return Formula::exists(v, body);
            case 5: return Formula::forall(v, body);
            case 6: {
                const std::uint64_t q = 2 + pick(3);
                return Formula::mod_exists(pick(q), q, v, body);
            }
            case 7: return Formula::majority(v, body);
            default: {
                // the counting index must avoid the bound variable
                std::vector<std::string> others;
                for (const auto& w : opt_.vars)
                    if (w != v) others.push_back(w);
                Term index = pick(2) == 0 || others.empty() ? Term::literal(pick(opt_.max_literal + 1))
                                                            : Term::var(others[pick(others.size())]);
                return Formula::count_ge(index, v, body);
            }
        }
    }

    std::mt19937_64 rng_;
    RandomFormulaOptions opt_;
};

}  // namespace ringspectra::logic
