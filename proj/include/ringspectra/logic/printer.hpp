#pragma once

#include <string>

#include "ringspectra/logic/ast.hpp"

namespace ringspectra::logic {

inline void print_term(const Term& t, std::string& out) {
    switch (t.kind()) {
        case TermKind::Var: out += t.name(); return;
        case TermKind::Literal: out += std::to_string(t.value()); return;
        case TermKind::Zero: out += '0'; return;
        case TermKind::Sum:
        case TermKind::Product:
            out += '(';
            print_term(t.lhs(), out);
            out += t.kind() == TermKind::Sum ? " + " : " * ";
            print_term(t.rhs(), out);
            out += ')';
            return;
    }
}

inline std::string to_string(const Term& t) {
    std::string out;
    print_term(t, out);
    return out;
}

// Fully parenthesized: every connective and quantifier gets its own parentheses,
// atoms stay bare since comparisons bind tighter than every connective.
inline void print_formula(const Formula& f, std::string& out) {
    switch (f.kind()) {
        case FormulaKind::Equal:
        case FormulaKind::Less:
            print_term(f.term(0), out);
            out += f.kind() == FormulaKind::Equal ? " = " : " < ";
            print_term(f.term(1), out);
            return;
        case FormulaKind::Times:
            out += "TIMES(";
            print_term(f.term(0), out);
            out += ", ";
            print_term(f.term(1), out);
            out += ", ";
            print_term(f.term(2), out);
            out += ')';
            return;
        case FormulaKind::Not:
            out += '!';
            print_formula(f.left(), out);
            return;
        case FormulaKind::And:
        case FormulaKind::Or:
        case FormulaKind::Implies:
            out += '(';
            print_formula(f.left(), out);
            out += f.kind() == FormulaKind::And ? " & " : f.kind() == FormulaKind::Or ? " | " : " -> ";
            print_formula(f.right(), out);
            out += ')';
            return;
        case FormulaKind::Exists: out += "(E "; break;
        case FormulaKind::Forall: out += "(A "; break;
        case FormulaKind::Majority: out += "(M "; break;
        case FormulaKind::ModExists:
            out += "(E[" + std::to_string(f.mod_r()) + "," + std::to_string(f.mod_q()) + "] ";
            break;
        case FormulaKind::CountGe:
            out += "(C>=(";
            print_term(f.count_term(), out);
            out += ") ";
            break;
    }
    out += f.var();
    out += ". ";
    print_formula(f.body(), out);
    out += ')';
}

inline std::string to_string(const Formula& f) {
    std::string out;
    print_formula(f, out);
    return out;
}

// Minimal-parenthesis form following the parser's precedence:
// * over +, atoms over !, quantifiers, &, |, ->.
inline void print_term_compact(const Term& t, int context, std::string& out) {
    if (!t.is_binary()) {
        print_term(t, out);
        return;
    }
    const bool sum = t.kind() == TermKind::Sum;
    const int prec = sum ? 1 : 2;
    if (prec < context) out += '(';
    print_term_compact(t.lhs(), prec, out);
    out += sum ? " + " : "*";
    print_term_compact(t.rhs(), prec + 1, out);
    if (prec < context) out += ')';
}

// open_right: nothing follows in the output, so a quantifier body may run to the end.
inline void print_formula_compact(const Formula& f, int context, bool open_right, std::string& out) {
    const FormulaKind k = f.kind();
    if (is_atom(k)) {
        if (k == FormulaKind::Times) {
            out += "TIMES(";
            print_term_compact(f.term(0), 0, out);
            out += ", ";
            print_term_compact(f.term(1), 0, out);
            out += ", ";
            print_term_compact(f.term(2), 0, out);
            out += ')';
            return;
        }
        print_term_compact(f.term(0), 0, out);
        out += k == FormulaKind::Equal ? " = " : " < ";
        print_term_compact(f.term(1), 0, out);
        return;
    }
    if (k == FormulaKind::Not) {
        out += '!';
        print_formula_compact(f.left(), 4, open_right, out);
        return;
    }
    if (is_binary(k)) {
        const int prec = k == FormulaKind::Implies ? 1 : k == FormulaKind::Or ? 2 : 3;
        const bool paren = prec < context;
        const bool right_open = paren || open_right;
        if (paren) out += '(';
        // & and | associate left, -> associates right
        const int lctx = k == FormulaKind::Implies ? prec + 1 : prec;
        const int rctx = k == FormulaKind::Implies ? prec : prec + 1;
        print_formula_compact(f.left(), lctx, false, out);
        out += k == FormulaKind::And ? " & " : k == FormulaKind::Or ? " | " : " -> ";
        print_formula_compact(f.right(), rctx, right_open, out);
        if (paren) out += ')';
        return;
    }
    const bool paren = !open_right;
    if (paren) out += '(';
    switch (k) {
        case FormulaKind::Exists: out += "E "; break;
        case FormulaKind::Forall: out += "A "; break;
        case FormulaKind::Majority: out += "M "; break;
        case FormulaKind::ModExists: out += "E[" + std::to_string(f.mod_r()) + "," + std::to_string(f.mod_q()) + "] "; break;
        default:
            out += "C>=(";
            print_term_compact(f.count_term(), 0, out);
            out += ") ";
    }
    out += f.var();
    out += ". ";
    print_formula_compact(f.body(), 0, true, out);
    if (paren) out += ')';
}

/// Readable text with only the parentheses the grammar needs.
inline std::string to_text(const Formula& f) {
    std::string out;
    print_formula_compact(f, 0, true, out);
    return out;
}

}  // namespace ringspectra::logic
