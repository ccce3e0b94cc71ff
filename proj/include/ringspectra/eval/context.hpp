#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "ringspectra/error.hpp"
#include "ringspectra/logic/ast.hpp"

namespace ringspectra::eval {

using Residue = std::uint32_t;

/// The residue ring Z_m over universe 0..m-1, ordered by representative.
class RingContext {
public:
    explicit RingContext(std::uint64_t m) : m_(m) {
        if (m < 1) throw InvalidArgument("ring modulus must be >= 1");
        if (m > std::numeric_limits<Residue>::max())
            throw ResourceLimit("ring modulus " + std::to_string(m) + " exceeds 32-bit residues");
    }

    std::uint64_t modulus() const noexcept { return m_; }
    Residue reduce(std::uint64_t v) const noexcept { return static_cast<Residue>(v % m_); }
    Residue add(Residue a, Residue b) const noexcept { return static_cast<Residue>((std::uint64_t{a} + b) % m_); }
    Residue mul(Residue a, Residue b) const noexcept { return static_cast<Residue>(std::uint64_t{a} * b % m_); }

private:
    std::uint64_t m_;
};

/// Literals k >= m in f; they denote k mod m, which strict mode flags.
inline void collect_large_literals(const logic::Term& t, std::uint64_t m, std::vector<std::uint64_t>& out) {
    using logic::TermKind;
    if (t.kind() == TermKind::Literal && t.value() >= m) out.push_back(t.value());
    if (t.is_binary()) {
        collect_large_literals(t.lhs(), m, out);
        collect_large_literals(t.rhs(), m, out);
    }
}

inline std::vector<std::uint64_t> large_literals(const logic::Formula& f, std::uint64_t m) {
    using logic::FormulaKind;
    std::vector<std::uint64_t> out;
    auto walk = [&](auto&& self, const logic::Formula& g) -> void {
        const FormulaKind k = g.kind();
        if (logic::is_atom(k)) {
            for (std::size_t i = 0; i < 3; ++i) collect_large_literals(g.term(i), m, out);
        } else if (k == FormulaKind::Not) {
            self(self, g.left());
        } else if (logic::is_binary(k)) {
            self(self, g.left());
            self(self, g.right());
        } else {
            if (k == FormulaKind::CountGe) collect_large_literals(g.count_term(), m, out);
            self(self, g.body());
        }
    };
    walk(walk, f);
    return out;
}

/// Term compiled to postfix over variable slots.
class CompiledTerm {
public:
    CompiledTerm() = default;

    template <class SlotOf>
    CompiledTerm(const logic::Term& t, const RingContext& ctx, SlotOf&& slot_of) : m_(ctx.modulus()) {
        compile(t, ctx, slot_of);
    }

    std::uint64_t eval(const Residue* env) const {
        std::uint64_t stack[64];
        std::size_t sp = 0;
        for (const Op& op : ops_) {
            switch (op.code) {
                case Code::Const: stack[sp++] = op.arg; break;
                case Code::Var: stack[sp++] = env[op.arg]; break;
                case Code::Add:
                    --sp;
                    stack[sp - 1] = (stack[sp - 1] + stack[sp]) % m_;
                    break;
                case Code::Mul:
                    --sp;
                    stack[sp - 1] = stack[sp - 1] * stack[sp] % m_;
                    break;
            }
        }
        return stack[0];
    }

    /// The single slot if the term is a bare variable.
    bool is_var() const noexcept { return ops_.size() == 1 && ops_[0].code == Code::Var; }
    bool is_const() const noexcept { return ops_.size() == 1 && ops_[0].code == Code::Const; }
    std::uint64_t first_arg() const noexcept { return ops_[0].arg; }

private:
    enum class Code : std::uint8_t { Const, Var, Add, Mul };
    struct Op {
        Code code;
        std::uint64_t arg;
    };

    template <class SlotOf>
    std::size_t compile(const logic::Term& t, const RingContext& ctx, SlotOf& slot_of) {
        using logic::TermKind;
        switch (t.kind()) {
            case TermKind::Var: ops_.push_back({Code::Var, slot_of(t.name())}); return 1;
            case TermKind::Literal: ops_.push_back({Code::Const, ctx.reduce(t.value())}); return 1;
            case TermKind::Zero: ops_.push_back({Code::Const, 0}); return 1;
            default: {
                std::size_t a = compile(t.lhs(), ctx, slot_of);
                std::size_t b = compile(t.rhs(), ctx, slot_of);
                ops_.push_back({t.kind() == TermKind::Sum ? Code::Add : Code::Mul, 0});
                std::size_t depth = std::max(a, b + 1);
                if (depth >= 64) throw ResourceLimit("term nesting too deep");
                return depth;
            }
        }
    }

    std::vector<Op> ops_;
    std::uint64_t m_ = 1;
};

}  // namespace ringspectra::eval
