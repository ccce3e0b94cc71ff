#pragma once

#include <cctype>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ringspectra/error.hpp"
#include "ringspectra/logic/ast.hpp"

namespace ringspectra::logic {

namespace detail {

enum class Tok {
    Ident,
    Number,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Dot,
    Equal,
    Less,
    GreaterEq,
    Plus,
    Star,
    Bang,
    Amp,
    Pipe,
    Arrow,
    End,
};

struct Token {
    Tok kind;
    std::string text;
    std::size_t line;
    std::size_t column;
};

inline std::vector<Token> tokenize(std::string_view src) {
    std::vector<Token> toks;
    std::size_t i = 0, line = 1, col = 1;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k) {
            if (src[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
            ++i;
        }
    };
    while (i < src.size()) {
        const char c = src[i];
        if (c == '#') {
            while (i < src.size() && src[i] != '\n') advance(1);
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        const std::size_t l = line, k = col;
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
            toks.push_back({Tok::Ident, std::string(src.substr(i, j - i)), l, k});
            advance(j - i);
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
            toks.push_back({Tok::Number, std::string(src.substr(i, j - i)), l, k});
            advance(j - i);
            continue;
        }
        auto two = src.substr(i, 2);
        if (two == "->") {
            toks.push_back({Tok::Arrow, "->", l, k});
            advance(2);
            continue;
        }
        if (two == ">=") {
            toks.push_back({Tok::GreaterEq, ">=", l, k});
            advance(2);
            continue;
        }
        Tok kind;
        switch (c) {
            case '(': kind = Tok::LParen; break;
            case ')': kind = Tok::RParen; break;
            case '[': kind = Tok::LBracket; break;
            case ']': kind = Tok::RBracket; break;
            case ',': kind = Tok::Comma; break;
            case '.': kind = Tok::Dot; break;
            case '=': kind = Tok::Equal; break;
            case '<': kind = Tok::Less; break;
            case '+': kind = Tok::Plus; break;
            case '*': kind = Tok::Star; break;
            case '!': kind = Tok::Bang; break;
            case '&': kind = Tok::Amp; break;
            case '|': kind = Tok::Pipe; break;
            default: throw SyntaxError(std::string("unexpected character '") + c + "'", l, k);
        }
        toks.push_back({kind, std::string(1, c), l, k});
        advance(1);
    }
    toks.push_back({Tok::End, "end of input", line, col});
    return toks;
}

class Parser {
public:
    explicit Parser(std::string_view text) : toks_(tokenize(text)) {}

    Formula parse_all() {
        Formula f = formula();
        if (peek().kind != Tok::End) fail("unexpected '" + peek().text + "' after formula");
        return f;
    }

private:
    const Token& peek() const { return toks_[pos_]; }
    bool at(Tok k) const { return peek().kind == k; }
    bool at_ident(std::string_view s) const { return at(Tok::Ident) && peek().text == s; }

    [[noreturn]] void fail(const std::string& msg) const { throw SyntaxError(msg, peek().line, peek().column); }
    [[noreturn]] void semantic(const std::string& msg, const Token& where) const {
        throw SemanticError(std::to_string(where.line) + ":" + std::to_string(where.column) + ": " + msg);
    }

    const Token& expect(Tok k, const char* what) {
        if (!at(k)) fail(std::string("expected ") + what + ", found '" + peek().text + "'");
        return toks_[pos_++];
    }

    Formula formula() {
        Formula lhs = disjunction();
        if (at(Tok::Arrow)) {
            ++pos_;
            return Formula::implies(std::move(lhs), formula());
        }
        return lhs;
    }

    Formula disjunction() {
        Formula f = conjunction();
        while (at(Tok::Pipe)) {
            ++pos_;
            f = Formula::disj(std::move(f), conjunction());
        }
        return f;
    }

    Formula conjunction() {
        Formula f = unary();
        while (at(Tok::Amp)) {
            ++pos_;
            f = Formula::conj(std::move(f), unary());
        }
        return f;
    }

    Formula unary() {
        if (at(Tok::Bang)) {
            ++pos_;
            return Formula::negation(unary());
        }
        if (at_ident("E") || at_ident("A") || at_ident("M") || at_ident("C")) return quantified();
        return primary();
    }

    std::string bound_var() {
        const Token& t = peek();
        if (t.kind != Tok::Ident || Term::is_keyword(t.text)) fail("expected a variable name, found '" + t.text + "'");
        ++pos_;
        return t.text;
    }

    std::uint64_t number() {
        const Token& t = expect(Tok::Number, "a number");
        try {
            return std::stoull(t.text);
        } catch (const std::out_of_range&) {
            throw SyntaxError("number out of range", t.line, t.column);
        }
    }

    Formula quantified() {
        const Token head = toks_[pos_++];
        if (head.text == "E" && at(Tok::LBracket)) {
            ++pos_;
            std::uint64_t r = number();
            expect(Tok::Comma, "','");
            std::uint64_t q = number();
            expect(Tok::RBracket, "']'");
            std::string v = bound_var();
            expect(Tok::Dot, "'.'");
            Formula body = formula();
            if (q < 2 || r >= q)
                semantic("E[" + std::to_string(r) + "," + std::to_string(q) + "] requires 0 <= r < q and q >= 2", head);
            return Formula::mod_exists(r, q, std::move(v), std::move(body));
        }
        if (head.text == "C") {
            bool exact;
            if (at(Tok::GreaterEq)) exact = false;
            else if (at(Tok::Equal)) exact = true;
            else fail("expected '>=' or '=' after C");
            ++pos_;
            expect(Tok::LParen, "'('");
            Term count = term();
            expect(Tok::RParen, "')'");
            std::string v = bound_var();
            expect(Tok::Dot, "'.'");
            Formula body = formula();
            if (count.contains_var(v)) semantic("counting index mentions the bound variable '" + v + "'", head);
            return exact ? count_exact(count, v, body) : Formula::count_ge(count, v, body);
        }
        std::string v = bound_var();
        expect(Tok::Dot, "'.'");
        Formula body = formula();
        if (head.text == "E") return Formula::exists(std::move(v), std::move(body));
        if (head.text == "A") return Formula::forall(std::move(v), std::move(body));
        return Formula::majority(std::move(v), std::move(body));
    }

    // "(" may open a parenthesized formula or the first term of an atom; try the
    // formula reading first and fall back to the atom.
    Formula primary() {
        if (at(Tok::LParen)) {
            const std::size_t save = pos_;
            std::optional<SyntaxError> formula_error;
            try {
                ++pos_;
                Formula f = formula();
                expect(Tok::RParen, "')'");
                if (!at(Tok::Equal) && !at(Tok::Less) && !at(Tok::Plus) && !at(Tok::Star)) return f;
            } catch (const SyntaxError& e) {
                formula_error = e;
            }
            const std::size_t formula_reach = pos_;
            pos_ = save;
            try {
                return atom();
            } catch (const SyntaxError& e) {
                // report whichever reading got further
                if (formula_error && formula_reach > pos_) throw *formula_error;
                throw;
            }
        }
        return atom();
    }

    Formula atom() {
        if (at_ident("TIMES")) {
            ++pos_;
            expect(Tok::LParen, "'(' after TIMES");
            Term a = term();
            expect(Tok::Comma, "','");
            Term b = term();
            expect(Tok::Comma, "','");
            Term c = term();
            expect(Tok::RParen, "')'");
            return Formula::times(std::move(a), std::move(b), std::move(c));
        }
        Term lhs = term();
        if (at(Tok::Equal)) {
            ++pos_;
            return Formula::equal(std::move(lhs), term());
        }
        if (at(Tok::Less)) {
            ++pos_;
            return Formula::less(std::move(lhs), term());
        }
        fail("expected '=' or '<', found '" + peek().text + "'");
    }

    Term term() {
        Term t = product();
        while (at(Tok::Plus)) {
            ++pos_;
            t = Term::sum(std::move(t), product());
        }
        return t;
    }

    Term product() {
        Term t = factor();
        while (at(Tok::Star)) {
            ++pos_;
            t = Term::product(std::move(t), factor());
        }
        return t;
    }

    Term factor() {
        if (at(Tok::Number)) return Term::literal(number());
        if (at(Tok::LParen)) {
            ++pos_;
            Term t = term();
            expect(Tok::RParen, "')'");
            return t;
        }
        if (at(Tok::Ident) && !Term::is_keyword(peek().text)) return Term::var(toks_[pos_++].text);
        fail("expected a term, found '" + peek().text + "'");
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses the concrete formula syntax; throws SyntaxError with line/column or SemanticError.
inline Formula parse(std::string_view text) { return detail::Parser(text).parse_all(); }

}  // namespace ringspectra::logic
