#pragma once

#include <algorithm>
#include <cctype>
#include <concepts>
#include <cstddef>
#include <initializer_list>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "ringspectra/error.hpp"

namespace ringspectra::arith {

using BigInt = boost::multiprecision::cpp_int;

template <class R>
concept CommutativeRing = std::regular<R> && requires(R a, R b) {
    { a + b } -> std::convertible_to<R>;
    { a - b } -> std::convertible_to<R>;
    { a * b } -> std::convertible_to<R>;
    { -a } -> std::convertible_to<R>;
};

/// Exact quotient a / b in Z; throws if b does not divide a.
inline BigInt exact_div(const BigInt& a, const BigInt& b) {
    if (b == 0) throw InvalidArgument("exact_div: division by zero");
    BigInt q, r;
    boost::multiprecision::divide_qr(a, b, q, r);
    if (r != 0) throw InvalidArgument("exact_div: inexact integer division");
    return q;
}

/// Dense univariate polynomial over a commutative ring R, lowest degree first.
/// The coefficient vector never carries trailing zeros; the zero polynomial is empty.
template <CommutativeRing R>
class Polynomial {
public:
    using coefficient_type = R;

    Polynomial() = default;
    Polynomial(std::vector<R> coeffs) : c_(std::move(coeffs)) { trim(); }
    Polynomial(std::initializer_list<R> coeffs) : c_(coeffs) { trim(); }
    Polynomial(const R& constant) : c_{constant} { trim(); }
    Polynomial(int constant) : c_{R(constant)} { trim(); }

    static Polynomial monomial(const R& c, std::size_t k) {
        std::vector<R> v(k + 1, R(0));
        v[k] = c;
        return Polynomial(std::move(v));
    }
    static Polynomial x() { return monomial(R(1), 1); }

    /// -1 for the zero polynomial.
    int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const noexcept { return c_.empty(); }
    bool is_constant() const noexcept { return c_.size() <= 1; }
    const std::vector<R>& coeffs() const noexcept { return c_; }

    R coeff(std::size_t k) const { return k < c_.size() ? c_[k] : R(0); }
    const R& leading() const {
        if (c_.empty()) throw InvalidArgument("leading coefficient of the zero polynomial");
        return c_.back();
    }

    R operator()(const R& at) const {
        R acc(0);
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * at + *it;
        return acc;
    }

    /// Substitute a polynomial for the variable.
    Polynomial compose(const Polynomial& inner) const {
        Polynomial acc;
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * inner + Polynomial(*it);
        return acc;
    }

    friend bool operator==(const Polynomial&, const Polynomial&) = default;

    Polynomial operator-() const {
        std::vector<R> v = c_;
        for (auto& a : v) a = -a;
        return Polynomial(std::move(v));
    }

    friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
        std::vector<R> v(std::max(a.c_.size(), b.c_.size()), R(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i) v[i] = v[i] + a.c_[i];
        for (std::size_t i = 0; i < b.c_.size(); ++i) v[i] = v[i] + b.c_[i];
        return Polynomial(std::move(v));
    }
    friend Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-b); }

    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        if (a.is_zero() || b.is_zero()) return {};
        std::vector<R> v(a.c_.size() + b.c_.size() - 1, R(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            for (std::size_t j = 0; j < b.c_.size(); ++j) v[i + j] = v[i + j] + a.c_[i] * b.c_[j];
        return Polynomial(std::move(v));
    }

    Polynomial& operator+=(const Polynomial& o) { return *this = *this + o; }
    Polynomial& operator-=(const Polynomial& o) { return *this = *this - o; }
    Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }

    Polynomial scaled(const R& s) const {
        std::vector<R> v = c_;
        for (auto& a : v) a = a * s;
        return Polynomial(std::move(v));
    }

    Polynomial shifted(std::size_t k) const {
        if (is_zero()) return {};
        std::vector<R> v(k, R(0));
        v.insert(v.end(), c_.begin(), c_.end());
        return Polynomial(std::move(v));
    }

private:
    void trim() {
        while (!c_.empty() && c_.back() == R(0)) c_.pop_back();
    }

    std::vector<R> c_;
};

template <CommutativeRing R>
Polynomial<R> pow(Polynomial<R> base, unsigned exp) {
    Polynomial<R> result(R(1));
    while (exp > 0) {
        if (exp & 1u) result *= base;
        exp >>= 1u;
        if (exp) base *= base;
    }
    return result;
}

inline BigInt pow(const BigInt& base, unsigned exp) { return boost::multiprecision::pow(base, exp); }

/// Exact quotient a / b over R[x]; every step divides leading coefficients exactly.
template <CommutativeRing R>
Polynomial<R> exact_div(const Polynomial<R>& a, const Polynomial<R>& b) {
    if (b.is_zero()) throw InvalidArgument("exact_div: division by the zero polynomial");
    if (a.degree() < b.degree()) {
        if (a.is_zero()) return {};
        throw InvalidArgument("exact_div: inexact polynomial division");
    }
    std::vector<R> q(static_cast<std::size_t>(a.degree() - b.degree() + 1), R(0));
    Polynomial<R> rem = a;
    while (!rem.is_zero() && rem.degree() >= b.degree()) {
        std::size_t shift = static_cast<std::size_t>(rem.degree() - b.degree());
        R t = exact_div(rem.leading(), b.leading());
        q[shift] = t;
        rem -= b.scaled(t).shifted(shift);
    }
    if (!rem.is_zero()) throw InvalidArgument("exact_div: inexact polynomial division");
    return Polynomial<R>(std::move(q));
}

/// Pseudo-remainder: lc(b)^(deg a - deg b + 1) * a mod b, without leaving R.
template <CommutativeRing R>
Polynomial<R> pseudo_remainder(const Polynomial<R>& a, const Polynomial<R>& b) {
    if (b.is_zero()) throw InvalidArgument("pseudo_remainder by the zero polynomial");
    if (a.degree() < b.degree()) return a;
    int e = a.degree() - b.degree() + 1;
    Polynomial<R> rem = a;
    const R& lb = b.leading();
    while (!rem.is_zero() && rem.degree() >= b.degree()) {
        std::size_t shift = static_cast<std::size_t>(rem.degree() - b.degree());
        R lr = rem.leading();
        rem = rem.scaled(lb) - b.scaled(lr).shifted(shift);
        --e;
    }
    for (int i = 0; i < e; ++i) rem = rem.scaled(lb);
    return rem;
}

using IntPolynomial = Polynomial<BigInt>;

inline IntPolynomial int_poly(std::initializer_list<long long> coeffs) {
    std::vector<BigInt> v;
    for (long long c : coeffs) v.emplace_back(c);
    return IntPolynomial(std::move(v));
}

/// Text form "c0 + c1*x + c2*x^2 + ...", zero terms omitted; "0" for the zero polynomial.
inline std::string to_string(const IntPolynomial& f) {
    if (f.is_zero()) return "0";
    std::ostringstream out;
    bool first = true;
    for (std::size_t k = 0; k < f.coeffs().size(); ++k) {
        const BigInt& c = f.coeffs()[k];
        if (c == 0) continue;
        if (!first) out << " + ";
        first = false;
        out << c;
        if (k >= 1) out << "*x";
        if (k >= 2) out << "^" << k;
    }
    return out.str();
}

/// Parses sums of terms c, c*x, x, c*x^k, x^k separated by '+' or '-'.
/// Whitespace is free; like terms accumulate.
inline IntPolynomial parse_int_polynomial(std::string_view text) {
    std::size_t pos = 0;
    auto fail = [&](const std::string& what) -> IntPolynomial {
        throw SyntaxError("polynomial: " + what, 1, pos + 1);
    };
    auto skip_ws = [&] {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    };
    auto read_digits = [&](std::string& out) {
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) out += text[pos++];
    };

    std::vector<BigInt> acc;
    auto add_term = [&](const BigInt& c, std::size_t k) {
        if (acc.size() <= k) acc.resize(k + 1, BigInt(0));
        acc[k] += c;
    };

    skip_ws();
    if (pos == text.size()) return fail("empty input");
    bool expect_term = true;
    int sign = 1;
    while (true) {
        skip_ws();
        if (pos == text.size()) break;
        char ch = text[pos];
        if (ch == '+' || ch == '-') {
            if (!expect_term) {
                sign = 1;
                expect_term = true;
            }
            if (ch == '-') sign = -sign;
            ++pos;
            continue;
        }
        if (!expect_term) return fail("expected '+' or '-'");
        BigInt coeff(1);
        bool have_coeff = false;
        if (std::isdigit(static_cast<unsigned char>(ch))) {
            std::string digits;
            read_digits(digits);
            coeff = BigInt(digits);
            have_coeff = true;
            skip_ws();
            if (pos < text.size() && text[pos] == '*') {
                ++pos;
                skip_ws();
                if (pos == text.size() || text[pos] != 'x') return fail("expected 'x' after '*'");
            }
        }
        std::size_t k = 0;
        if (pos < text.size() && text[pos] == 'x') {
            ++pos;
            k = 1;
            skip_ws();
            if (pos < text.size() && text[pos] == '^') {
                ++pos;
                skip_ws();
                std::string digits;
                read_digits(digits);
                if (digits.empty()) return fail("expected exponent");
                k = std::stoul(digits);
            }
        } else if (!have_coeff) {
            return fail(std::string("unexpected character '") + ch + "'");
        }
        add_term(sign < 0 ? BigInt(-coeff) : coeff, k);
        sign = 1;
        expect_term = false;
    }
    if (expect_term) return fail("dangling operator");
    return IntPolynomial(std::move(acc));
}

}  // namespace ringspectra::arith
