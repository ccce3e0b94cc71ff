#pragma once

#include <array>
#include <cctype>
#include <cstdint>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <utility>

#include "ringspectra/error.hpp"

namespace ringspectra::logic {

enum class TermKind { Var, Literal, Zero, Sum, Product };

/// Immutable term handle: variable, natural literal, the constant 0, sum or product.
/// Copies share structure.
class Term {
public:
    static Term var(std::string name) {
        if (!is_identifier(name)) throw InvalidArgument("invalid variable name '" + name + "'");
        return Term(std::make_shared<const Node>(Node{TermKind::Var, std::move(name), 0, {}, {}}));
    }
    /// Literal k; k = 0 is the zero constant.
    static Term literal(std::uint64_t k) {
        if (k == 0) return zero();
        return Term(std::make_shared<const Node>(Node{TermKind::Literal, {}, k, {}, {}}));
    }
    static Term zero() { return Term(std::make_shared<const Node>(Node{TermKind::Zero, {}, 0, {}, {}})); }
    static Term sum(Term a, Term b) {
        return Term(std::make_shared<const Node>(Node{TermKind::Sum, {}, 0, std::move(a.node_), std::move(b.node_)}));
    }
    static Term product(Term a, Term b) {
        return Term(
            std::make_shared<const Node>(Node{TermKind::Product, {}, 0, std::move(a.node_), std::move(b.node_)}));
    }

    Term(std::string_view name) : Term(var(std::string(name))) {}
    Term(const std::string& name) : Term(var(name)) {}
    Term(const char* name) : Term(var(name)) {}
    Term(std::uint64_t k) : Term(literal(k)) {}
    Term(int k) : Term(literal(checked(k))) {}

    TermKind kind() const noexcept { return node_->kind; }
    const std::string& name() const noexcept { return node_->name; }
    std::uint64_t value() const noexcept { return node_->value; }
    Term lhs() const { return Term(node_->lhs); }
    Term rhs() const { return Term(node_->rhs); }
    bool is_binary() const noexcept { return kind() == TermKind::Sum || kind() == TermKind::Product; }

    bool contains_var(const std::string& v) const {
        switch (kind()) {
            case TermKind::Var: return name() == v;
            case TermKind::Sum:
            case TermKind::Product: return lhs().contains_var(v) || rhs().contains_var(v);
            default: return false;
        }
    }

    void collect_vars(std::set<std::string>& out) const {
        if (kind() == TermKind::Var) out.insert(name());
        else if (is_binary()) {
            lhs().collect_vars(out);
            rhs().collect_vars(out);
        }
    }

    friend bool operator==(const Term& a, const Term& b) {
        if (a.node_ == b.node_) return true;
        if (a.kind() != b.kind()) return false;
        switch (a.kind()) {
            case TermKind::Var: return a.name() == b.name();
            case TermKind::Literal: return a.value() == b.value();
            case TermKind::Zero: return true;
            default: return a.lhs() == b.lhs() && a.rhs() == b.rhs();
        }
    }

    friend Term operator+(Term a, Term b) { return sum(std::move(a), std::move(b)); }
    friend Term operator*(Term a, Term b) { return product(std::move(a), std::move(b)); }

    static bool is_identifier(const std::string& s) {
        if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
        for (char c : s)
            if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
        return !is_keyword(s);
    }
    static bool is_keyword(const std::string& s) {
        return s == "E" || s == "A" || s == "M" || s == "C" || s == "TIMES";
    }

private:
    struct Node {
        TermKind kind;
        std::string name;
        std::uint64_t value;
        std::shared_ptr<const Node> lhs, rhs;
    };

    explicit Term(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    static std::uint64_t checked(int k) {
        if (k < 0) throw InvalidArgument("term literals are nonnegative");
        return static_cast<std::uint64_t>(k);
    }

    std::shared_ptr<const Node> node_;
};

enum class FormulaKind {
    Equal,
    Less,
    Times,
    Not,
    And,
    Or,
    Implies,
    Exists,
    Forall,
    ModExists,
    Majority,
    CountGe,
};

inline bool is_atom(FormulaKind k) { return k == FormulaKind::Equal || k == FormulaKind::Less || k == FormulaKind::Times; }
inline bool is_quantifier(FormulaKind k) {
    return k == FormulaKind::Exists || k == FormulaKind::Forall || k == FormulaKind::ModExists ||
           k == FormulaKind::Majority || k == FormulaKind::CountGe;
}
inline bool is_binary(FormulaKind k) { return k == FormulaKind::And || k == FormulaKind::Or || k == FormulaKind::Implies; }

/// Immutable formula handle over the ring signature with order, TIMES and
/// five quantifier kinds (exists, forall, E[r,q], majority, counting).
class Formula {
public:
    static Formula equal(Term a, Term b) { return atom(FormulaKind::Equal, {std::move(a), std::move(b), Term::zero()}); }
    static Formula less(Term a, Term b) { return atom(FormulaKind::Less, {std::move(a), std::move(b), Term::zero()}); }
    /// a * b = c as integers, no wraparound.
    static Formula times(Term a, Term b, Term c) { return atom(FormulaKind::Times, {std::move(a), std::move(b), std::move(c)}); }

    static Formula negation(Formula f) {
        Node n = blank(FormulaKind::Not);
        n.left = std::move(f.node_);
        return Formula(std::move(n));
    }
    static Formula conj(Formula a, Formula b) { return binary(FormulaKind::And, std::move(a), std::move(b)); }
    static Formula disj(Formula a, Formula b) { return binary(FormulaKind::Or, std::move(a), std::move(b)); }
    static Formula implies(Formula a, Formula b) { return binary(FormulaKind::Implies, std::move(a), std::move(b)); }

    static Formula exists(std::string v, Formula body) { return quant(FormulaKind::Exists, std::move(v), std::move(body)); }
    static Formula forall(std::string v, Formula body) { return quant(FormulaKind::Forall, std::move(v), std::move(body)); }
    static Formula majority(std::string v, Formula body) { return quant(FormulaKind::Majority, std::move(v), std::move(body)); }

    /// Number of witnesses is congruent to r modulo q; requires 0 <= r < q, q >= 2.
    static Formula mod_exists(std::uint64_t r, std::uint64_t q, std::string v, Formula body) {
        if (q < 2 || r >= q)
            throw InvalidArgument("E[" + std::to_string(r) + "," + std::to_string(q) + "] requires 0 <= r < q and q >= 2");
        Formula f = quant(FormulaKind::ModExists, std::move(v), std::move(body));
        auto n = std::make_shared<Node>(*f.node_);
        n->r = r;
        n->q = q;
        return Formula(std::move(n));
    }

    /// At least value(count) witnesses; the bound variable may not occur in count.
    static Formula count_ge(Term count, std::string v, Formula body) {
        if (count.contains_var(v))
            throw InvalidArgument("counting index may not mention the bound variable '" + v + "'");
        Formula f = quant(FormulaKind::CountGe, std::move(v), std::move(body));
        auto n = std::make_shared<Node>(*f.node_);
        n->terms[0] = std::move(count);
        return Formula(std::move(n));
    }

    FormulaKind kind() const noexcept { return node_->kind; }
    const Term& term(std::size_t i) const { return node_->terms[i]; }
    /// Operand of Not, left operand of binary connectives, body of quantifiers.
    Formula left() const { return Formula(node_->left); }
    Formula right() const { return Formula(node_->right); }
    Formula body() const { return Formula(node_->left); }
    const std::string& var() const noexcept { return node_->var; }
    std::uint64_t mod_r() const noexcept { return node_->r; }
    std::uint64_t mod_q() const noexcept { return node_->q; }
    const Term& count_term() const { return node_->terms[0]; }

    /// Identity of the shared node, stable for the lifetime of any copy.
    const void* id() const noexcept { return node_.get(); }

    friend bool operator==(const Formula& a, const Formula& b) {
        if (a.node_ == b.node_) return true;
        if (a.kind() != b.kind()) return false;
        const FormulaKind k = a.kind();
        if (is_atom(k)) return a.term(0) == b.term(0) && a.term(1) == b.term(1) && a.term(2) == b.term(2);
        if (k == FormulaKind::Not) return a.left() == b.left();
        if (is_binary(k)) return a.left() == b.left() && a.right() == b.right();
        if (a.var() != b.var() || !(a.body() == b.body())) return false;
        if (k == FormulaKind::ModExists) return a.mod_r() == b.mod_r() && a.mod_q() == b.mod_q();
        if (k == FormulaKind::CountGe) return a.count_term() == b.count_term();
        return true;
    }

    friend Formula operator!(Formula f) { return negation(std::move(f)); }
    friend Formula operator&&(Formula a, Formula b) { return conj(std::move(a), std::move(b)); }
    friend Formula operator||(Formula a, Formula b) { return disj(std::move(a), std::move(b)); }

private:
    struct Node {
        FormulaKind kind;
        std::array<Term, 3> terms;
        std::shared_ptr<const Node> left, right;
        std::string var;
        std::uint64_t r = 0, q = 0;
    };

    explicit Formula(Node n) : node_(std::make_shared<const Node>(std::move(n))) {}
    explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

    static Node blank(FormulaKind k) { return Node{k, {Term::zero(), Term::zero(), Term::zero()}, {}, {}, {}, 0, 0}; }
    static Formula atom(FormulaKind k, std::array<Term, 3> terms) {
        Node n = blank(k);
        n.terms = std::move(terms);
        return Formula(std::move(n));
    }
    static Formula binary(FormulaKind k, Formula a, Formula b) {
        Node n = blank(k);
        n.left = std::move(a.node_);
        n.right = std::move(b.node_);
        return Formula(std::move(n));
    }
    static Formula quant(FormulaKind k, std::string v, Formula body) {
        if (!Term::is_identifier(v)) throw InvalidArgument("invalid variable name '" + v + "'");
        Node n = blank(k);
        n.var = std::move(v);
        n.left = std::move(body.node_);
        return Formula(std::move(n));
    }

    std::shared_ptr<const Node> node_;
};

// Short builders for programmatic construction.
inline Formula eq(Term a, Term b) { return Formula::equal(std::move(a), std::move(b)); }
inline Formula lt(Term a, Term b) { return Formula::less(std::move(a), std::move(b)); }
inline Formula ne(Term a, Term b) { return !eq(std::move(a), std::move(b)); }
inline Formula times(Term a, Term b, Term c) { return Formula::times(std::move(a), std::move(b), std::move(c)); }
inline Formula implies(Formula a, Formula b) { return Formula::implies(std::move(a), std::move(b)); }
inline Formula exists(std::string v, Formula f) { return Formula::exists(std::move(v), std::move(f)); }
inline Formula forall(std::string v, Formula f) { return Formula::forall(std::move(v), std::move(f)); }

inline void collect_free_vars(const Formula& f, std::set<std::string>& bound, std::set<std::string>& out) {
    auto add_term = [&](const Term& t) {
        std::set<std::string> vs;
        t.collect_vars(vs);
        for (const auto& v : vs)
            if (!bound.contains(v)) out.insert(v);
    };
    const FormulaKind k = f.kind();
    if (is_atom(k)) {
        for (std::size_t i = 0; i < 3; ++i) add_term(f.term(i));
        return;
    }
    if (k == FormulaKind::Not) {
        collect_free_vars(f.left(), bound, out);
        return;
    }
    if (is_binary(k)) {
        collect_free_vars(f.left(), bound, out);
        collect_free_vars(f.right(), bound, out);
        return;
    }
    if (k == FormulaKind::CountGe) add_term(f.count_term());
    const bool fresh = bound.insert(f.var()).second;
    collect_free_vars(f.body(), bound, out);
    if (fresh) bound.erase(f.var());
}

inline std::set<std::string> free_vars(const Formula& f) {
    std::set<std::string> bound, out;
    collect_free_vars(f, bound, out);
    return out;
}

/// (exactly `count` values of v satisfy f), as count_ge(count) and not count_ge(count + 1).
inline Formula count_exact(const Term& count, const std::string& v, const Formula& f) {
    if (count.contains_var(v))
        throw InvalidArgument("count_exact: bound variable '" + v + "' occurs in the counting index");
    return Formula::count_ge(count, v, f) && !Formula::count_ge(count + Term::literal(1), v, f);
}

/// A formula with no free variables.
class Sentence {
public:
    explicit Sentence(Formula f) : f_(std::move(f)) {
        auto fv = free_vars(f_);
        if (!fv.empty()) throw InvalidArgument("sentence has free variable '" + *fv.begin() + "'");
    }
    const Formula& formula() const noexcept { return f_; }

private:
    Formula f_;
};

}  // namespace ringspectra::logic
