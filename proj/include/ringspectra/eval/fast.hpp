#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "ringspectra/arith/modular.hpp"
#include "ringspectra/error.hpp"
#include "ringspectra/eval/context.hpp"
#include "ringspectra/eval/relation.hpp"
#include "ringspectra/logic/ast.hpp"
#include "ringspectra/logic/printer.hpp"

namespace ringspectra::eval {

struct FastOptions {
    /// Largest intermediate relation (rows) before ResourceLimit.
    std::uint64_t tuple_budget = 50'000'000;
    /// Widest negated subformula complemented directly; wider ones are scanned.
    std::size_t width_cap = 3;
    bool memoize = true;
};

namespace detail {

enum class NKind { Atom, Not, And, Or, Exists, Forall, ModExists, Majority, CountGe };

inline bool is_quant(NKind k) { return k >= NKind::Exists; }

struct NNode {
    NKind kind = NKind::Atom;
    logic::FormulaKind atom = logic::FormulaKind::Equal;
    std::vector<logic::Term> terms;  // atom operands, or the counting index
    std::vector<int> kids;
    std::string var;
    std::uint64_t r = 0, q = 0;
    std::vector<std::string> free;       // sorted
    std::string key;                     // alpha-canonical text
    std::vector<std::string> key_order;  // free variable behind each $k of key
};

// Formula with implications removed and negations pushed inward; independent of m.
class Plan {
public:
    Plan(const logic::Formula& f, std::size_t width_cap) : cap_(width_cap) {
        root_ = build(f, false);
        for (std::size_t i = 0; i < nodes_.size(); ++i) canonicalize(static_cast<int>(i));
    }

    const NNode& node(int id) const { return nodes_[static_cast<std::size_t>(id)]; }
    int root() const noexcept { return root_; }
    std::size_t size() const noexcept { return nodes_.size(); }

    logic::Formula formula(int id) const {
        using logic::Formula;
        const NNode& n = node(id);
        switch (n.kind) {
            case NKind::Atom:
                if (n.atom == logic::FormulaKind::Equal) return Formula::equal(n.terms[0], n.terms[1]);
                if (n.atom == logic::FormulaKind::Less) return Formula::less(n.terms[0], n.terms[1]);
                return Formula::times(n.terms[0], n.terms[1], n.terms[2]);
            case NKind::Not: return Formula::negation(formula(n.kids[0]));
            case NKind::And:
            case NKind::Or: {
                Formula f = formula(n.kids[0]);
                for (std::size_t i = 1; i < n.kids.size(); ++i)
                    f = n.kind == NKind::And ? Formula::conj(f, formula(n.kids[i])) : Formula::disj(f, formula(n.kids[i]));
                return f;
            }
            case NKind::Exists: return Formula::exists(n.var, formula(n.kids[0]));
            case NKind::Forall: return Formula::forall(n.var, formula(n.kids[0]));
            case NKind::Majority: return Formula::majority(n.var, formula(n.kids[0]));
            case NKind::ModExists: return Formula::mod_exists(n.r, n.q, n.var, formula(n.kids[0]));
            case NKind::CountGe: return Formula::count_ge(n.terms[0], n.var, formula(n.kids[0]));
        }
        throw EvalError("unknown node kind");
    }

private:
    int add(NNode n) {
        std::set<std::string> fv;
        switch (n.kind) {
            case NKind::Atom:
                for (const auto& t : n.terms) t.collect_vars(fv);
                break;
            case NKind::Not:
            case NKind::And:
            case NKind::Or:
                for (int k : n.kids) fv.insert(node(k).free.begin(), node(k).free.end());
                break;
            default:
                fv.insert(node(n.kids[0]).free.begin(), node(n.kids[0]).free.end());
                fv.erase(n.var);
                if (n.kind == NKind::CountGe) n.terms[0].collect_vars(fv);
        }
        n.free.assign(fv.begin(), fv.end());
        nodes_.push_back(std::move(n));
        return static_cast<int>(nodes_.size()) - 1;
    }

    int negate(int id) {
        if (node(id).kind == NKind::Not) return node(id).kids[0];
        NNode n;
        n.kind = NKind::Not;
        n.kids = {id};
        return add(std::move(n));
    }

    int junction(NKind kind, std::initializer_list<int> parts) {
        NNode n;
        n.kind = kind;
        for (int p : parts) {
            if (node(p).kind == kind) n.kids.insert(n.kids.end(), node(p).kids.begin(), node(p).kids.end());
            else n.kids.push_back(p);
        }
        return add(std::move(n));
    }

    int quant(NKind kind, const logic::Formula& f, int body) {
        NNode n;
        n.kind = kind;
        n.var = f.var();
        n.kids = {body};
        n.r = f.mod_r();
        n.q = f.mod_q();
        if (kind == NKind::CountGe) n.terms = {f.count_term()};
        return add(std::move(n));
    }

    int build(const logic::Formula& f, bool neg) {
        using logic::FormulaKind;
        switch (f.kind()) {
            case FormulaKind::Equal:
            case FormulaKind::Less:
            case FormulaKind::Times: {
                NNode n;
                n.atom = f.kind();
                n.terms = {f.term(0), f.term(1), f.term(2)};
                int id = add(std::move(n));
                return neg ? negate(id) : id;
            }
            case FormulaKind::Not: return build(f.left(), !neg);
            case FormulaKind::And: {
                int id = junction(NKind::And, {build(f.left(), false), build(f.right(), false)});
                return neg ? negate(id) : id;
            }
            case FormulaKind::Or:
                if (!neg) return junction(NKind::Or, {build(f.left(), false), build(f.right(), false)});
                return junction(NKind::And, {build(f.left(), true), build(f.right(), true)});
            case FormulaKind::Implies:
                if (!neg) return junction(NKind::Or, {build(f.left(), true), build(f.right(), false)});
                return junction(NKind::And, {build(f.left(), false), build(f.right(), true)});
            case FormulaKind::Exists: {
                int id = quant(NKind::Exists, f, build(f.body(), false));
                return neg ? negate(id) : id;
            }
            case FormulaKind::Forall:
                if (neg) return quant(NKind::Exists, f, build(f.body(), true));
                if (logic::free_vars(f).size() <= cap_) return negate(quant(NKind::Exists, f, build(f.body(), true)));
                return quant(NKind::Forall, f, build(f.body(), false));
            case FormulaKind::ModExists:
            case FormulaKind::Majority:
            case FormulaKind::CountGe: {
                NKind k = f.kind() == FormulaKind::ModExists  ? NKind::ModExists
                          : f.kind() == FormulaKind::Majority ? NKind::Majority
                                                              : NKind::CountGe;
                int id = quant(k, f, build(f.body(), false));
                return neg ? negate(id) : id;
            }
        }
        throw EvalError("unknown formula kind");
    }

    struct CanonState {
        std::vector<std::string> scope;
        std::map<std::string, std::size_t> ids;
        std::vector<std::string> order;
        std::string out;
    };

    static void canon_term(const logic::Term& t, CanonState& s) {
        using logic::TermKind;
        switch (t.kind()) {
            case TermKind::Var: {
                for (std::size_t i = s.scope.size(); i-- > 0;)
                    if (s.scope[i] == t.name()) {
                        s.out += '@' + std::to_string(i);
                        return;
                    }
                auto [it, fresh] = s.ids.emplace(t.name(), s.order.size());
                if (fresh) s.order.push_back(t.name());
                s.out += '$' + std::to_string(it->second);
                return;
            }
            case TermKind::Literal: s.out += std::to_string(t.value()); return;
            case TermKind::Zero: s.out += '0'; return;
            default:
                s.out += '(';
                canon_term(t.lhs(), s);
                s.out += t.kind() == TermKind::Sum ? '+' : '*';
                canon_term(t.rhs(), s);
                s.out += ')';
        }
    }

    void canon(int id, CanonState& s) const {
        const NNode& n = node(id);
        switch (n.kind) {
            case NKind::Atom:
                s.out += n.atom == logic::FormulaKind::Equal ? "=(" : n.atom == logic::FormulaKind::Less ? "<(" : "T(";
                for (std::size_t i = 0; i < (n.atom == logic::FormulaKind::Times ? 3u : 2u); ++i) {
                    if (i) s.out += ',';
                    canon_term(n.terms[i], s);
                }
                s.out += ')';
                return;
            case NKind::Not:
            case NKind::And:
            case NKind::Or:
                s.out += n.kind == NKind::Not ? "!(" : n.kind == NKind::And ? "&(" : "|(";
                for (std::size_t i = 0; i < n.kids.size(); ++i) {
                    if (i) s.out += ',';
                    canon(n.kids[i], s);
                }
                s.out += ')';
                return;
            case NKind::Exists: s.out += 'E'; break;
            case NKind::Forall: s.out += 'A'; break;
            case NKind::Majority: s.out += 'M'; break;
            case NKind::ModExists: s.out += "E[" + std::to_string(n.r) + ',' + std::to_string(n.q) + ']'; break;
            case NKind::CountGe:
                s.out += "C(";
                canon_term(n.terms[0], s);
                s.out += ')';
                break;
        }
        s.scope.push_back(n.var);
        s.out += '@' + std::to_string(s.scope.size() - 1) + ".(";
        canon(n.kids[0], s);
        s.out += ')';
        s.scope.pop_back();
    }

    void canonicalize(int id) {
        CanonState s;
        canon(id, s);
        nodes_[static_cast<std::size_t>(id)].key = std::move(s.out);
        nodes_[static_cast<std::size_t>(id)].key_order = std::move(s.order);
    }

    std::size_t cap_;
    std::vector<NNode> nodes_;
    int root_ = -1;
};

// Witness counts of a quantifier body, grouped by the body's other free variables.
struct GroupIndex {
    std::vector<std::string> key_cols;
    std::vector<Residue> keys;  // sorted, flat
    std::vector<std::uint64_t> counts;
    std::vector<std::uint32_t> direct;  // one-column lookup table

    std::size_t width() const noexcept { return key_cols.size(); }
    std::size_t groups() const noexcept { return counts.size(); }
    const Residue* key(std::size_t i) const noexcept { return keys.data() + i * width(); }

    std::uint64_t count(const Residue* k) const {
        const std::size_t w = width();
        if (w == 0) return counts.empty() ? 0 : counts[0];
        if (!direct.empty()) return direct[k[0]];
        std::size_t lo = 0, hi = counts.size();
        while (lo < hi) {
            std::size_t mid = (lo + hi) / 2;
            if (std::lexicographical_compare(key(mid), key(mid) + w, k, k + w)) lo = mid + 1;
            else hi = mid;
        }
        return lo < counts.size() && std::equal(k, k + w, key(lo)) ? counts[lo] : 0;
    }
};

struct Tester {
    virtual ~Tester() = default;
    virtual bool test(const Residue* row) const = 0;
};

struct AtomTester final : Tester {
    logic::FormulaKind kind;
    CompiledTerm a, b, c;
    bool test(const Residue* row) const override {
        switch (kind) {
            case logic::FormulaKind::Equal: return a.eval(row) == b.eval(row);
            case logic::FormulaKind::Less: return a.eval(row) < b.eval(row);
            default: return a.eval(row) * b.eval(row) == c.eval(row);
        }
    }
};

struct NotTester final : Tester {
    std::unique_ptr<Tester> inner;
    bool test(const Residue* row) const override { return !inner->test(row); }
};

struct JunctionTester final : Tester {
    bool conjunction;
    std::vector<std::unique_ptr<Tester>> parts;
    bool test(const Residue* row) const override {
        for (const auto& p : parts)
            if (p->test(row) != conjunction) return !conjunction;
        return conjunction;
    }
};

struct QuantTester final : Tester {
    NKind kind;
    std::shared_ptr<const GroupIndex> groups;
    std::vector<std::size_t> key_pos;
    std::uint64_t m, r, q;
    CompiledTerm index;
    bool test(const Residue* row) const override {
        Residue key[64];
        for (std::size_t i = 0; i < key_pos.size(); ++i) key[i] = row[key_pos[i]];
        const std::uint64_t c = groups->count(key);
        switch (kind) {
            case NKind::Exists: return c > 0;
            case NKind::Forall: return c == m;
            case NKind::ModExists: return c % q == r;
            case NKind::Majority: return 2 * c > m;
            default: return c >= index.eval(row);
        }
    }
};

// Multivariate polynomial over an atom's variables, coefficients mod m.
struct ModPoly {
    std::map<std::vector<std::uint32_t>, std::uint64_t> terms;

    static ModPoly expand(const logic::Term& t, const std::vector<std::string>& vars, std::uint64_t m) {
        using logic::TermKind;
        ModPoly p;
        std::vector<std::uint32_t> zero(vars.size(), 0);
        switch (t.kind()) {
            case TermKind::Var: {
                auto e = zero;
                e[static_cast<std::size_t>(std::find(vars.begin(), vars.end(), t.name()) - vars.begin())] = 1;
                p.add(e, 1 % m, m);
                return p;
            }
            case TermKind::Literal: p.add(zero, t.value() % m, m); return p;
            case TermKind::Zero: return p;
            case TermKind::Sum: {
                p = expand(t.lhs(), vars, m);
                ModPoly q = expand(t.rhs(), vars, m);
                for (const auto& [e, c] : q.terms) p.add(e, c, m);
                return p;
            }
            case TermKind::Product: {
                ModPoly a = expand(t.lhs(), vars, m), b = expand(t.rhs(), vars, m);
                for (const auto& [ea, ca] : a.terms)
                    for (const auto& [eb, cb] : b.terms) {
                        auto e = ea;
                        for (std::size_t i = 0; i < e.size(); ++i) e[i] += eb[i];
                        p.add(e, arith::mulmod(ca, cb, m), m);
                    }
                return p;
            }
        }
        return p;
    }

    void add(const std::vector<std::uint32_t>& e, std::uint64_t c, std::uint64_t m) {
        if (c == 0) return;
        auto [it, fresh] = terms.emplace(e, c);
        if (!fresh) {
            it->second = (it->second + c) % m;
            if (it->second == 0) terms.erase(it);
        }
    }
};

struct Mono {
    std::uint64_t coef;
    std::vector<std::pair<std::size_t, std::uint32_t>> factors;  // (slot, exponent)

    std::uint64_t eval(const Residue* row, std::uint64_t m) const {
        std::uint64_t v = coef;
        for (const auto& [slot, e] : factors) v = v * arith::powmod(row[slot], e, m) % m;
        return v;
    }
};

// Calls fn for every assignment of the given slots in buf (lexicographic order).
template <class Fn>
void for_each_assignment(std::vector<Residue>& buf, const std::vector<std::size_t>& slots, std::uint64_t m, Fn&& fn) {
    for (std::size_t s : slots) buf[s] = 0;
    if (m == 0) return;
    while (true) {
        fn();
        std::size_t i = slots.size();
        while (i > 0) {
            --i;
            if (++buf[slots[i]] < m) break;
            buf[slots[i]] = 0;
            if (i == 0) return;
        }
        if (slots.empty()) return;
    }
}

// Evaluation of a Plan in one ring; owns memo tables, so not shared across threads.
class Run {
public:
    Run(const Plan& plan, const RingContext& ctx, const FastOptions& opt)
        : plan_(plan), ctx_(ctx), m_(ctx.modulus()), opt_(opt), groups_(plan.size()) {}

    Relation materialize(int id) {
        const NNode& n = plan_.node(id);
        const bool cached = opt_.memoize && n.kind != NKind::Atom;
        if (cached) {
            auto it = memo_.find(n.key);
            if (it != memo_.end()) {
                Relation r = it->second;
                std::vector<std::string> cols;
                for (const auto& c : r.columns()) cols.push_back(n.key_order[std::stoul(c.substr(1))]);
                r.rename(std::move(cols));
                return r.sorted_columns();
            }
        }
        Relation rel;
        try {
            rel = compute(id).sorted_columns();
        } catch (const BudgetExceeded& e) {
            throw ResourceLimit("tuple budget " + std::to_string(opt_.tuple_budget) + " exceeded (" +
                                std::to_string(e.rows) + " rows) in Z_" + std::to_string(m_) +
                                " while evaluating subformula " + logic::to_string(plan_.formula(id)));
        }
        if (cached) {
            Relation stored = rel;
            std::vector<std::string> cols;
            for (const auto& c : rel.columns())
                cols.push_back('$' + std::to_string(std::find(n.key_order.begin(), n.key_order.end(), c) -
                                                    n.key_order.begin()));
            stored.rename(std::move(cols));
            memo_.emplace(n.key, std::move(stored));
        }
        return rel;
    }

private:
    Relation compute(int id) {
        const NNode& n = plan_.node(id);
        switch (n.kind) {
            case NKind::Atom: return extend_atom(Relation::unit(), n.atom, n.terms, n.free);
            case NKind::Not: return negation(id);
            case NKind::And: return conjunction(id);
            case NKind::Or: return disjunction(id);
            default: return quantifier(id);
        }
    }

    std::size_t slot(const std::vector<std::string>& layout, const std::string& name) const {
        auto it = std::find(layout.begin(), layout.end(), name);
        if (it == layout.end()) throw EvalError("internal: variable '" + name + "' missing from row layout");
        return static_cast<std::size_t>(it - layout.begin());
    }

    CompiledTerm compile(const logic::Term& t, const std::vector<std::string>& layout) const {
        return CompiledTerm(t, ctx_, [&](const std::string& v) { return slot(layout, v); });
    }

    bool covered(int id, const std::vector<std::string>& cols) const {
        for (const auto& v : plan_.node(id).free)
            if (std::find(cols.begin(), cols.end(), v) == cols.end()) return false;
        return true;
    }

    std::vector<std::string> uncovered(int id, const std::vector<std::string>& cols) const {
        std::vector<std::string> out;
        for (const auto& v : plan_.node(id).free)
            if (std::find(cols.begin(), cols.end(), v) == cols.end()) out.push_back(v);
        return out;
    }

    // ---- testers ----

    std::unique_ptr<Tester> tester(int id, const std::vector<std::string>& layout) {
        const NNode& n = plan_.node(id);
        switch (n.kind) {
            case NKind::Atom: {
                auto t = std::make_unique<AtomTester>();
                t->kind = n.atom;
                t->a = compile(n.terms[0], layout);
                t->b = compile(n.terms[1], layout);
                t->c = compile(n.terms[2], layout);
                return t;
            }
            case NKind::Not: {
                auto t = std::make_unique<NotTester>();
                t->inner = tester(n.kids[0], layout);
                return t;
            }
            case NKind::And:
            case NKind::Or: {
                auto t = std::make_unique<JunctionTester>();
                t->conjunction = n.kind == NKind::And;
                std::vector<int> kids = n.kids;
                std::stable_partition(kids.begin(), kids.end(), [&](int k) { return plan_.node(k).kind == NKind::Atom; });
                for (int k : kids) t->parts.push_back(tester(k, layout));
                return t;
            }
            default: {
                auto t = std::make_unique<QuantTester>();
                t->kind = n.kind;
                t->groups = group(id);
                for (const auto& c : t->groups->key_cols) t->key_pos.push_back(slot(layout, c));
                if (t->key_pos.size() > 64) throw ResourceLimit("quantifier group key wider than 64 variables");
                t->m = m_;
                t->r = n.r;
                t->q = n.q;
                if (n.kind == NKind::CountGe) t->index = compile(n.terms[0], layout);
                return t;
            }
        }
    }

    Relation filter(const Relation& rel, int id) {
        auto t = tester(id, rel.columns());
        Relation out(rel.columns());
        for (std::size_t i = 0; i < rel.size(); ++i)
            if (t->test(rel.row(i))) out.push_row(rel.row(i));
        return out;
    }

    std::shared_ptr<const GroupIndex> group(int id) {
        auto& slot_ref = groups_[static_cast<std::size_t>(id)];
        if (slot_ref) return slot_ref;
        const NNode& n = plan_.node(id);
        Relation body = materialize(n.kids[0]);
        auto g = std::make_shared<GroupIndex>();
        for (const auto& c : body.columns())
            if (c != n.var) g->key_cols.push_back(c);
        const std::size_t w = g->key_cols.size();
        if (body.column_index(n.var) < 0) {
            g->keys = body.data();
            g->counts.assign(body.size(), m_);
        } else {
            std::vector<std::string> cols = g->key_cols;
            cols.push_back(n.var);
            Relation sorted = body.project(cols);
            for (std::size_t i = 0; i < sorted.size();) {
                std::size_t j = i + 1;
                while (j < sorted.size() && std::equal(sorted.row(i), sorted.row(i) + w, sorted.row(j))) ++j;
                g->keys.insert(g->keys.end(), sorted.row(i), sorted.row(i) + w);
                g->counts.push_back(j - i);
                i = j;
            }
        }
        if (w == 1 && m_ <= (std::uint64_t{1} << 24)) {
            g->direct.assign(m_, 0);
            for (std::size_t i = 0; i < g->groups(); ++i) g->direct[g->keys[i]] = static_cast<std::uint32_t>(g->counts[i]);
        }
        slot_ref = g;
        return g;
    }

    // ---- connectives ----

    Relation negation(int id) {
        const NNode& n = plan_.node(id);
        if (n.free.empty()) {
            Relation out;
            if (!materialize(n.kids[0]).truth()) out = Relation::unit();
            return out;
        }
        if (n.free.size() <= opt_.width_cap) return complement(materialize(n.kids[0]), m_, opt_.tuple_budget);
        // too wide to complement: test every assignment
        Relation all = cross_extend(Relation::unit(), n.free, m_, opt_.tuple_budget);
        return filter(all, id);
    }

    Relation disjunction(int id) {
        const NNode& n = plan_.node(id);
        Relation out(n.free);
        for (int k : n.kids) {
            Relation part = materialize(k);
            part = cross_extend(part, uncovered(id, part.columns()), m_, opt_.tuple_budget).project(n.free);
            out.append(part);
            check_budget(out.size(), opt_.tuple_budget);
        }
        out.normalize();
        return out;
    }

    Relation conjunction(int id) {
        const NNode& n = plan_.node(id);
        std::vector<int> pending = n.kids;
        Relation rel = Relation::unit();
        auto take = [&](std::size_t i) {
            int k = pending[i];
            pending.erase(pending.begin() + static_cast<std::ptrdiff_t>(i));
            return k;
        };
        while (!pending.empty()) {
            // covered children filter the current rows, atoms first
            bool filtered = false;
            for (int pass = 0; pass < 2 && !rel.empty(); ++pass)
                for (std::size_t i = 0; i < pending.size() && !rel.empty();) {
                    const bool atom = plan_.node(pending[i]).kind == NKind::Atom;
                    if (atom == (pass == 0) && covered(pending[i], rel.columns())) {
                        rel = filter(rel, take(i));
                        filtered = true;
                    } else {
                        ++i;
                    }
                }
            if (rel.empty()) return Relation(n.free);
            if (filtered) continue;

            // atoms binding their new variables with at most one value per row
            std::size_t pick = pending.size();
            for (std::size_t i = 0; i < pending.size() && pick == pending.size(); ++i)
                if (plan_.node(pending[i]).kind == NKind::Atom && atom_cost(pending[i], rel.columns()) <= 1.0) pick = i;
            if (pick < pending.size()) {
                const NNode& a = plan_.node(take(pick));
                rel = extend_atom(rel, a.atom, a.terms, a.free);
                if (rel.empty()) return Relation(n.free);
                continue;
            }

            // positive subformulas: materialize and join, existentials first
            for (int want = 0; want < 3 && pick == pending.size(); ++want)
                for (std::size_t i = 0; i < pending.size() && pick == pending.size(); ++i) {
                    NKind k = plan_.node(pending[i]).kind;
                    if ((want == 0 && k == NKind::Exists) || (want == 1 && is_quant(k)) ||
                        (want == 2 && (k == NKind::Or || k == NKind::And)))
                        pick = i;
                }
            if (pick < pending.size()) {
                Relation part = materialize(take(pick));
                if (part.empty()) return Relation(n.free);
                rel = join(rel, part, opt_.tuple_budget);
                if (rel.empty()) return Relation(n.free);
                continue;
            }

            // cheapest remaining atom or negation
            double best = 0;
            for (std::size_t i = 0; i < pending.size(); ++i) {
                const NNode& c = plan_.node(pending[i]);
                double cost = c.kind == NKind::Atom
                                  ? atom_cost(pending[i], rel.columns())
                                  : std::pow(static_cast<double>(m_), static_cast<double>(uncovered(pending[i], rel.columns()).size()));
                if (pick == pending.size() || cost < best) {
                    best = cost;
                    pick = i;
                }
            }
            if (static_cast<double>(rel.size()) * best > static_cast<double>(opt_.tuple_budget) * 4)
                throw BudgetExceeded{static_cast<std::uint64_t>(std::min(1e19, static_cast<double>(rel.size()) * best))};
            if (plan_.node(pending[pick]).kind == NKind::Atom) {
                const NNode& a = plan_.node(take(pick));
                rel = extend_atom(rel, a.atom, a.terms, a.free);
            } else {
                rel = cross_extend(rel, uncovered(pending[pick], rel.columns()), m_, opt_.tuple_budget);
            }
            if (rel.empty()) return Relation(n.free);
        }
        return rel;
    }

    // ---- quantifiers ----

    Relation quantifier(int id) {
        const NNode& n = plan_.node(id);
        auto g = group(id);
        const std::size_t w = g->width();
        Relation out(g->key_cols);
        auto keep = [&](auto&& pred) {
            for (std::size_t i = 0; i < g->groups(); ++i)
                if (pred(g->counts[i])) out.push_row(g->key(i));
        };
        switch (n.kind) {
            case NKind::Exists: keep([](std::uint64_t) { return true; }); return out;
            case NKind::Forall: keep([&](std::uint64_t c) { return c == m_; }); return out;
            case NKind::Majority: keep([&](std::uint64_t c) { return 2 * c > m_; }); return out;
            case NKind::ModExists:
                if (n.r != 0) {
                    keep([&](std::uint64_t c) { return c % n.q == n.r; });
                    return out;
                }
                // absent groups have count 0, which qualifies
                keep([&](std::uint64_t c) { return c % n.q != 0; });
                return complement(out, m_, opt_.tuple_budget);
            default: break;
        }

        // counting: rows (key, index vars) with value(index) <= count(key)
        const logic::Term& index = n.terms[0];
        std::set<std::string> tv_set;
        index.collect_vars(tv_set);
        std::vector<std::string> tvars(tv_set.begin(), tv_set.end()), extra;
        for (const auto& v : tvars)
            if (std::find(g->key_cols.begin(), g->key_cols.end(), v) == g->key_cols.end()) extra.push_back(v);

        // index 0 holds for every key, present or not
        Relation zeros = extend_atom(Relation::unit(), logic::FormulaKind::Equal, {index, logic::Term::zero(), logic::Term::zero()}, tvars);
        std::vector<std::string> missing;
        for (const auto& c : g->key_cols)
            if (!tv_set.contains(c)) missing.push_back(c);
        Relation result = cross_extend(zeros, missing, m_, opt_.tuple_budget).project(n.free);

        std::vector<std::string> layout = g->key_cols;
        layout.insert(layout.end(), extra.begin(), extra.end());
        Relation pos(layout);
        CompiledTerm t = compile(index, layout);
        std::vector<Residue> buf(layout.size());
        std::vector<std::size_t> extra_slots;
        for (std::size_t i = w; i < layout.size(); ++i) extra_slots.push_back(i);
        const bool single = extra.size() == 1 && index.kind() == logic::TermKind::Var;
        for (std::size_t i = 0; i < g->groups(); ++i) {
            const std::uint64_t c = g->counts[i];
            std::copy(g->key(i), g->key(i) + w, buf.begin());
            if (single) {
                for (std::uint64_t v = 1; v <= std::min(c, m_ - 1); ++v) {
                    buf[w] = static_cast<Residue>(v);
                    pos.push_row(buf);
                }
            } else {
                for_each_assignment(buf, extra_slots, m_, [&] {
                    const std::uint64_t v = t.eval(buf.data());
                    if (v >= 1 && v <= c) pos.push_row(buf);
                });
            }
            check_budget(pos.size(), opt_.tuple_budget);
        }
        result.append(pos.project(n.free));
        result.normalize();
        return result;
    }

    // ---- atoms ----

    double atom_cost(int id, const std::vector<std::string>& bound) const {
        const NNode& n = plan_.node(id);
        const std::vector<std::string> open = uncovered(id, bound);
        const double m = static_cast<double>(m_);
        const double full = std::pow(m, static_cast<double>(open.size()));
        if (open.empty()) return 0;
        switch (n.atom) {
            case logic::FormulaKind::Equal: {
                ModPoly p = poly(n);
                for (const auto& u : open)
                    if (linear_in(p, n.free, u)) return full / m;
                return full;
            }
            case logic::FormulaKind::Less:
                if (range_var(n, open)) return full / 2;
                return full;
            default: {
                auto shape = times_shape(n, open);
                if (!shape) return full;
                const auto& pos = *shape;
                std::size_t unknown = 0;
                for (int p : pos) unknown += p >= 0;
                if (unknown <= 1) return 1;
                if (unknown == 2) {
                    if (pos[2] < 0) return pos[0] == pos[1] ? 1 : std::log(m) + 2;
                    return m / 2;
                }
                return pos[0] == pos[1] ? std::sqrt(m) : m * (std::log(m) + 1);
            }
        }
    }

    ModPoly poly(const NNode& n) const {
        ModPoly p = ModPoly::expand(n.terms[0], n.free, m_);
        ModPoly rhs = ModPoly::expand(n.terms[1], n.free, m_);
        for (const auto& [e, c] : rhs.terms) p.add(e, (m_ - c) % m_, m_);
        return p;
    }

    static bool linear_in(const ModPoly& p, const std::vector<std::string>& vars, const std::string& u) {
        const std::size_t k = static_cast<std::size_t>(std::find(vars.begin(), vars.end(), u) - vars.begin());
        for (const auto& [e, c] : p.terms)
            if (e[k] > 1) return false;
        return true;
    }

    // For t < u or u < t with u a bare open variable absent from t: u's name and side.
    static std::optional<std::pair<std::string, bool>> range_var(const NNode& n, const std::vector<std::string>& open) {
        auto bare_open = [&](const logic::Term& t) {
            return t.kind() == logic::TermKind::Var && std::find(open.begin(), open.end(), t.name()) != open.end();
        };
        if (bare_open(n.terms[0]) && !n.terms[1].contains_var(n.terms[0].name())) return std::pair{n.terms[0].name(), true};
        if (bare_open(n.terms[1]) && !n.terms[0].contains_var(n.terms[1].name())) return std::pair{n.terms[1].name(), false};
        return std::nullopt;
    }

    // TIMES positions: index into `open` for a bare open variable, -1 for a closed term.
    // nullopt if some position mixes open variables into a compound term.
    static std::optional<std::array<int, 3>> times_shape(const NNode& n, const std::vector<std::string>& open) {
        std::array<int, 3> pos{-1, -1, -1};
        for (std::size_t i = 0; i < 3; ++i) {
            const logic::Term& t = n.terms[i];
            if (t.kind() == logic::TermKind::Var) {
                auto it = std::find(open.begin(), open.end(), t.name());
                if (it != open.end()) pos[i] = static_cast<int>(it - open.begin());
                continue;
            }
            for (const auto& v : open)
                if (t.contains_var(v)) return std::nullopt;
        }
        return pos;
    }

    // rel joined with the satisfying assignments of an atom over its open variables.
    Relation extend_atom(const Relation& rel, logic::FormulaKind kind, const std::vector<logic::Term>& terms,
                         const std::vector<std::string>& vars) {
        std::vector<std::string> open;
        for (const auto& v : vars)
            if (rel.column_index(v) < 0) open.push_back(v);
        std::vector<std::string> layout = rel.columns();
        layout.insert(layout.end(), open.begin(), open.end());
        Relation out(layout);
        std::vector<Residue> buf(layout.size(), 0);
        const std::size_t k = rel.arity();
        std::vector<std::size_t> open_slots;
        for (std::size_t i = k; i < layout.size(); ++i) open_slots.push_back(i);

        NNode a;
        a.atom = kind;
        a.terms = terms;
        a.free = vars;

        auto per_row = [&](auto&& gen) {
            for (std::size_t i = 0; i < rel.size(); ++i) {
                std::copy(rel.row(i), rel.row(i) + k, buf.begin());
                gen();
                check_budget(out.size(), opt_.tuple_budget);
            }
        };
        auto scan = [&] {
            const double iters = static_cast<double>(rel.size()) * std::pow(static_cast<double>(m_), static_cast<double>(open.size()));
            if (iters > static_cast<double>(opt_.tuple_budget) * 4) throw BudgetExceeded{static_cast<std::uint64_t>(std::min(iters, 1e19))};
            AtomTester t;
            t.kind = kind;
            t.a = compile(terms[0], layout);
            t.b = compile(terms[1], layout);
            t.c = compile(terms[2], layout);
            per_row([&] {
                for_each_assignment(buf, open_slots, m_, [&] {
                    if (t.test(buf.data())) out.push_row(buf);
                });
            });
            return out;
        };

        if (kind == logic::FormulaKind::Equal) {
            ModPoly p = poly(a);
            std::string u;
            for (const auto& v : open)
                if (linear_in(p, vars, v)) {
                    u = v;
                    break;
                }
            if (u.empty()) return scan();
            const std::size_t ui = static_cast<std::size_t>(std::find(vars.begin(), vars.end(), u) - vars.begin());
            const std::size_t u_slot = slot(layout, u);
            std::vector<Mono> coef_a, coef_b;
            for (const auto& [e, c] : p.terms) {
                Mono mono{c, {}};
                for (std::size_t i = 0; i < e.size(); ++i)
                    if (e[i] > 0 && i != ui) mono.factors.push_back({slot(layout, vars[i]), e[i]});
                (e[ui] == 1 ? coef_a : coef_b).push_back(std::move(mono));
            }
            std::vector<std::size_t> rest;
            for (std::size_t s : open_slots)
                if (s != u_slot) rest.push_back(s);
            const double iters = static_cast<double>(rel.size()) * std::pow(static_cast<double>(m_), static_cast<double>(rest.size()));
            if (iters > static_cast<double>(opt_.tuple_budget) * 4) throw BudgetExceeded{static_cast<std::uint64_t>(std::min(iters, 1e19))};
            per_row([&] {
                for_each_assignment(buf, rest, m_, [&] {
                    std::uint64_t A = 0, B = 0;
                    for (const auto& mono : coef_a) A = (A + mono.eval(buf.data(), m_)) % m_;
                    for (const auto& mono : coef_b) B = (B + mono.eval(buf.data(), m_)) % m_;
                    // A*u = -B (mod m): gcd(A, m) solutions spaced m/g apart, or none
                    const std::uint64_t rhs = (m_ - B) % m_;
                    const std::uint64_t g = std::gcd(A, m_);
                    if (rhs % g != 0) return;
                    const std::uint64_t step = m_ / g;
                    std::uint64_t u0 = 0;
                    if (step > 1) {
                        std::int64_t x, y;
                        arith::ext_gcd(static_cast<std::int64_t>((A / g) % step), static_cast<std::int64_t>(step), x, y);
                        const std::uint64_t inv = static_cast<std::uint64_t>((x % static_cast<std::int64_t>(step) + static_cast<std::int64_t>(step)) %
                                                                             static_cast<std::int64_t>(step));
                        u0 = arith::mulmod((rhs / g) % step, inv, step);
                    }
                    for (std::uint64_t s = 0; s < g; ++s) {
                        buf[u_slot] = static_cast<Residue>(u0 + s * step);
                        out.push_row(buf);
                    }
                });
            });
            return out;
        }

        if (kind == logic::FormulaKind::Less) {
            auto rv = range_var(a, open);
            if (!rv) return scan();
            const std::size_t u_slot = slot(layout, rv->first);
            const bool below = rv->second;  // u < t, else t < u
            CompiledTerm other = compile(terms[below ? 1 : 0], layout);
            std::vector<std::size_t> rest;
            for (std::size_t s : open_slots)
                if (s != u_slot) rest.push_back(s);
            per_row([&] {
                for_each_assignment(buf, rest, m_, [&] {
                    const std::uint64_t w = other.eval(buf.data());
                    const std::uint64_t lo = below ? 0 : w + 1, hi = below ? w : m_;
                    for (std::uint64_t v = lo; v < hi; ++v) {
                        buf[u_slot] = static_cast<Residue>(v);
                        out.push_row(buf);
                    }
                });
            });
            return out;
        }

        auto shape = times_shape(a, open);
        if (!shape) return scan();
        const std::array<int, 3> pos = *shape;
        std::array<CompiledTerm, 3> known;
        for (std::size_t i = 0; i < 3; ++i)
            if (pos[i] < 0) known[i] = compile(terms[i], layout);
        auto emit = [&](std::uint64_t x, std::uint64_t y, std::uint64_t z) {
            const std::uint64_t v[3] = {x, y, z};
            for (std::size_t i = 0; i < 3; ++i) {
                if (pos[i] < 0) continue;
                const std::size_t s = k + static_cast<std::size_t>(pos[i]);
                // a variable repeated across positions must agree; first occurrence sets it
                bool first = true;
                for (std::size_t j = 0; j < i; ++j)
                    if (pos[j] == pos[i]) first = false;
                if (first) buf[s] = static_cast<Residue>(v[i]);
                else if (buf[s] != v[i]) return;
            }
            out.push_row(buf);
        };
        const std::uint64_t m = m_;
        per_row([&] {
            std::uint64_t val[3] = {0, 0, 0};
            for (std::size_t i = 0; i < 3; ++i)
                if (pos[i] < 0) val[i] = known[i].eval(buf.data());
            const bool ka = pos[0] < 0, kb = pos[1] < 0, kc = pos[2] < 0;
            const std::uint64_t a0 = val[0], b0 = val[1], c0 = val[2];
            if (ka && kb) {
                const std::uint64_t c = a0 * b0;
                if (c < m && (kc ? c == c0 : true)) emit(a0, b0, c);
            } else if (ka != kb && kc) {
                // one factor open, product known
                const std::uint64_t f = ka ? a0 : b0;
                auto put = [&](std::uint64_t x) { ka ? emit(a0, x, c0) : emit(x, b0, c0); };
                if (f == 0) {
                    if (c0 == 0)
                        for (std::uint64_t x = 0; x < m; ++x) put(x);
                } else if (c0 % f == 0) {
                    put(c0 / f);
                }
            } else if (ka != kb) {
                // one factor known, other factor and product open
                const std::uint64_t f = ka ? a0 : b0;
                auto put = [&](std::uint64_t x, std::uint64_t c) { ka ? emit(a0, x, c) : emit(x, b0, c); };
                if (f == 0) {
                    for (std::uint64_t x = 0; x < m; ++x) put(x, 0);
                } else {
                    for (std::uint64_t x = 0; x * f < m; ++x) put(x, x * f);
                }
            } else if (kc) {
                // both factors open: divisor pairs of c
                if (pos[0] == pos[1]) {
                    const std::uint64_t r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(c0)));
                    for (std::uint64_t x = r > 0 ? r - 1 : 0; x <= r + 1; ++x)
                        if (x * x == c0) emit(x, x, c0);
                } else if (c0 == 0) {
                    for (std::uint64_t x = 0; x < m; ++x) emit(0, x, 0);
                    for (std::uint64_t x = 1; x < m; ++x) emit(x, 0, 0);
                } else {
                    for (std::uint64_t d = 1; d * d <= c0; ++d)
                        if (c0 % d == 0) {
                            emit(d, c0 / d, c0);
                            if (d * d != c0) emit(c0 / d, d, c0);
                        }
                }
            } else if (pos[0] == pos[1]) {
                for (std::uint64_t x = 0; x * x < m; ++x) emit(x, x, x * x);
            } else {
                for (std::uint64_t x = 0; x < m; ++x) emit(0, x, 0);
                for (std::uint64_t x = 1; x < m; ++x)
                    for (std::uint64_t y = 0; x * y < m; ++y) emit(x, y, x * y);
            }
        });
        return out;
    }

    const Plan& plan_;
    const RingContext& ctx_;
    std::uint64_t m_;
    const FastOptions& opt_;
    std::unordered_map<std::string, Relation> memo_;
    std::vector<std::shared_ptr<const GroupIndex>> groups_;
};

}  // namespace detail

/// Bottom-up relational evaluator. Prepared once per formula, then evaluated in
/// any number of rings; evaluate() is const and safe to call concurrently.
class FastEvaluator {
public:
    explicit FastEvaluator(const logic::Formula& f, FastOptions opt = {})
        : opt_(opt), plan_(f, opt.width_cap), free_(plan_.node(plan_.root()).free) {}

    const std::vector<std::string>& free_vars() const noexcept { return free_; }

    /// Satisfying assignments over the free variables, columns in name order.
    Relation evaluate(const RingContext& ctx) const {
        detail::Run run(plan_, ctx, opt_);
        return run.materialize(plan_.root());
    }

    bool holds(const RingContext& ctx) const {
        if (!free_.empty()) throw EvalError("formula has free variable '" + free_.front() + "'");
        return evaluate(ctx).truth();
    }

private:
    FastOptions opt_;
    detail::Plan plan_;
    std::vector<std::string> free_;
};

inline Relation eval_fast(const RingContext& ctx, const logic::Formula& f, const FastOptions& opt = {}) {
    return FastEvaluator(f, opt).evaluate(ctx);
}

}  // namespace ringspectra::eval
