#pragma once

#include <cmath>
#include <memory>
#include <string>

#include "ringspectra/error.hpp"
#include "ringspectra/eval/context.hpp"
#include "ringspectra/eval/fast.hpp"
#include "ringspectra/eval/naive.hpp"
#include "ringspectra/logic/ast.hpp"

namespace ringspectra::eval {

enum class Engine { Auto, Naive, Fast, Both };

inline Engine parse_engine(const std::string& s) {
    if (s == "auto") return Engine::Auto;
    if (s == "naive") return Engine::Naive;
    if (s == "fast") return Engine::Fast;
    if (s == "both") return Engine::Both;
    throw InvalidArgument("unknown engine '" + s + "' (expected auto, naive, fast or both)");
}

/// Steps the naive evaluator needs in Z_m: quantifiers multiply by m.
inline double naive_cost(const logic::Formula& f, std::uint64_t m) {
    using logic::FormulaKind;
    const FormulaKind k = f.kind();
    if (logic::is_atom(k)) return 1;
    if (k == FormulaKind::Not) return 1 + naive_cost(f.left(), m);
    if (logic::is_binary(k)) return 1 + naive_cost(f.left(), m) + naive_cost(f.right(), m);
    return 1 + static_cast<double>(m) * naive_cost(f.body(), m);
}

/// Naive evaluation is preferred up to this many estimated steps.
inline constexpr double kNaiveCostLimit = 2e5;

/// A sentence prepared for repeated evaluation in many rings.
class SentenceEvaluator {
public:
    explicit SentenceEvaluator(logic::Sentence s, Engine engine = Engine::Auto, FastOptions opt = {})
        : sentence_(std::move(s)), engine_(engine), fast_(sentence_.formula(), opt) {}

    bool operator()(const RingContext& ctx) const {
        switch (engine_) {
            case Engine::Naive: return eval_naive(ctx, sentence_.formula());
            case Engine::Fast: return fast_.holds(ctx);
            case Engine::Both: {
                const bool a = eval_naive(ctx, sentence_.formula());
                const bool b = fast_.holds(ctx);
                if (a != b)
                    throw EvalError("engines disagree in Z_" + std::to_string(ctx.modulus()) + ": naive " +
                                    (a ? "true" : "false") + ", fast " + (b ? "true" : "false"));
                return a;
            }
            case Engine::Auto: break;
        }
        if (naive_cost(sentence_.formula(), ctx.modulus()) <= kNaiveCostLimit) return eval_naive(ctx, sentence_.formula());
        return fast_.holds(ctx);
    }

    const logic::Sentence& sentence() const noexcept { return sentence_; }

private:
    logic::Sentence sentence_;
    Engine engine_;
    FastEvaluator fast_;
};

/// Z_m |= s, by whichever engine is estimated cheaper (or the one requested).
inline bool eval_sentence(const RingContext& ctx, const logic::Sentence& s, Engine engine = Engine::Auto,
                          const FastOptions& opt = {}) {
    return SentenceEvaluator(s, engine, opt)(ctx);
}

/// Satisfying assignments of a possibly open formula, columns in name order.
/// The naive route enumerates all m^k assignments.
inline Relation satisfying(const RingContext& ctx, const logic::Formula& f, Engine engine = Engine::Auto,
                           const FastOptions& opt = {}) {
    const auto fv = logic::free_vars(f);
    const std::vector<std::string> cols(fv.begin(), fv.end());
    auto naive = [&] {
        const std::uint64_t total = detail::power_sat(ctx.modulus(), cols.size());
        if (total > opt.tuple_budget)
            throw ResourceLimit("enumerating " + std::to_string(cols.size()) + " free variables over Z_" +
                                std::to_string(ctx.modulus()) + " exceeds the tuple budget");
        Relation out(cols);
        std::vector<Residue> vals(cols.size(), 0);
        Assignment env;
        for (std::uint64_t step = 0; step < total; ++step) {
            for (std::size_t i = 0; i < cols.size(); ++i) env[cols[i]] = vals[i];
            if (eval_naive(ctx, f, env)) out.push_row(vals);
            for (std::size_t i = cols.size(); i-- > 0;) {
                if (++vals[i] < ctx.modulus()) break;
                vals[i] = 0;
            }
        }
        return out;
    };
    auto fast = [&] { return eval_fast(ctx, f, opt).sorted_columns(); };
    switch (engine) {
        case Engine::Naive: return naive();
        case Engine::Fast: return fast();
        case Engine::Both: {
            Relation a = naive(), b = fast();
            if (!(a == b)) throw EvalError("engines disagree in Z_" + std::to_string(ctx.modulus()));
            return a;
        }
        case Engine::Auto: break;
    }
    if (static_cast<double>(detail::power_sat(ctx.modulus(), cols.size())) * naive_cost(f, ctx.modulus()) <= kNaiveCostLimit)
        return naive();
    return fast();
}

}  // namespace ringspectra::eval
