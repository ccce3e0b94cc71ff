#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ringspectra/error.hpp"
#include "ringspectra/eval/context.hpp"
#include "ringspectra/logic/ast.hpp"

namespace ringspectra::eval {

using Assignment = std::map<std::string, Residue>;

namespace detail {

// Reference semantics by direct recursion. Every bound variable gets its own slot;
// the environment vector is indexed by slot.
class NaiveEvaluator {
public:
    NaiveEvaluator(const RingContext& ctx, const logic::Formula& f, const std::vector<std::string>& free_names)
        : ctx_(ctx) {
        for (const auto& name : free_names) scope_.push_back({name, slots_++});
        root_ = compile(f);
    }

    std::size_t slot_count() const noexcept { return slots_; }

    bool eval(std::vector<Residue>& env) const { return eval(root_, env); }

private:
    using Kind = logic::FormulaKind;

    struct Node {
        Kind kind;
        CompiledTerm t0, t1, t2;
        int left = -1, right = -1;
        std::size_t slot = 0;
        std::uint64_t r = 0, q = 0;
    };

    std::size_t lookup(const std::string& name) const {
        for (auto it = scope_.rbegin(); it != scope_.rend(); ++it)
            if (it->first == name) return it->second;
        throw EvalError("unbound variable '" + name + "'");
    }

    int compile(const logic::Formula& f) {
        Node n;
        n.kind = f.kind();
        auto slot_of = [this](const std::string& v) { return lookup(v); };
        if (logic::is_atom(n.kind)) {
            n.t0 = CompiledTerm(f.term(0), ctx_, slot_of);
            n.t1 = CompiledTerm(f.term(1), ctx_, slot_of);
            n.t2 = CompiledTerm(f.term(2), ctx_, slot_of);
        } else if (n.kind == Kind::Not) {
            n.left = compile(f.left());
        } else if (logic::is_binary(n.kind)) {
            n.left = compile(f.left());
            n.right = compile(f.right());
        } else {
            if (n.kind == Kind::CountGe) n.t0 = CompiledTerm(f.count_term(), ctx_, slot_of);
            n.r = f.mod_r();
            n.q = f.mod_q();
            n.slot = slots_++;
            scope_.push_back({f.var(), n.slot});
            n.left = compile(f.body());
            scope_.pop_back();
        }
        nodes_.push_back(std::move(n));
        return static_cast<int>(nodes_.size()) - 1;
    }

    std::uint64_t count_witnesses(const Node& n, std::vector<Residue>& env, std::uint64_t stop_at) const {
        std::uint64_t count = 0;
        const std::uint64_t m = ctx_.modulus();
        for (std::uint64_t v = 0; v < m && count < stop_at; ++v) {
            env[n.slot] = static_cast<Residue>(v);
            if (eval(n.left, env)) ++count;
        }
        return count;
    }

    bool eval(int idx, std::vector<Residue>& env) const {
        const Node& n = nodes_[static_cast<std::size_t>(idx)];
        const std::uint64_t m = ctx_.modulus();
        switch (n.kind) {
            case Kind::Equal: return n.t0.eval(env.data()) == n.t1.eval(env.data());
            case Kind::Less: return n.t0.eval(env.data()) < n.t1.eval(env.data());
            case Kind::Times: return n.t0.eval(env.data()) * n.t1.eval(env.data()) == n.t2.eval(env.data());
            case Kind::Not: return !eval(n.left, env);
            case Kind::And: return eval(n.left, env) && eval(n.right, env);
            case Kind::Or: return eval(n.left, env) || eval(n.right, env);
            case Kind::Implies: return !eval(n.left, env) || eval(n.right, env);
            case Kind::Exists:
                for (std::uint64_t v = 0; v < m; ++v) {
                    env[n.slot] = static_cast<Residue>(v);
                    if (eval(n.left, env)) return true;
                }
                return false;
            case Kind::Forall:
                for (std::uint64_t v = 0; v < m; ++v) {
                    env[n.slot] = static_cast<Residue>(v);
                    if (!eval(n.left, env)) return false;
                }
                return true;
            case Kind::ModExists: return count_witnesses(n, env, m) % n.q == n.r;
            case Kind::Majority: return 2 * count_witnesses(n, env, m) > m;
            case Kind::CountGe: {
                // the index lives in the enclosing scope, so evaluate it before binding
                const std::uint64_t need = n.t0.eval(env.data());
                return count_witnesses(n, env, need) >= need;
            }
        }
        return false;
    }

    const RingContext& ctx_;
    std::vector<std::pair<std::string, std::size_t>> scope_;
    std::vector<Node> nodes_;
    std::size_t slots_ = 0;
    int root_ = -1;
};

}  // namespace detail

/// Truth of f in Z_m under env, by direct recursion over the universe.
inline bool eval_naive(const RingContext& ctx, const logic::Formula& f, const Assignment& env = {}) {
    std::vector<std::string> names;
    std::vector<Residue> values;
    for (const auto& [name, value] : env) {
        if (value >= ctx.modulus()) throw EvalError("assigned value out of range for '" + name + "'");
        names.push_back(name);
        values.push_back(value);
    }
    detail::NaiveEvaluator ev(ctx, f, names);
    values.resize(ev.slot_count(), 0);
    return ev.eval(values);
}

}  // namespace ringspectra::eval
