#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "ringspectra/arith/cyclotomic.hpp"
#include "ringspectra/arith/primes.hpp"
#include "ringspectra/error.hpp"
#include "ringspectra/logic/ast.hpp"

namespace ringspectra::constructions {

using logic::Formula;
using logic::Sentence;
using logic::Term;

namespace detail {

inline Term lit(std::uint64_t k) { return Term::literal(k); }

inline Term power(const Term& x, std::uint64_t n) {
    Term t = x;
    for (std::uint64_t i = 1; i < n; ++i) t = t * x;
    return t;
}

// Bound-variable names that cannot capture the given free variables.
inline std::vector<std::string> names_avoiding(std::initializer_list<std::string> taken, std::size_t count) {
    static const char* pool[] = {"x", "y", "w", "u", "v", "s", "t", "a", "b", "c"};
    std::vector<std::string> out;
    for (const char* n : pool) {
        if (std::find(taken.begin(), taken.end(), n) == taken.end()) out.emplace_back(n);
        if (out.size() == count) break;
    }
    return out;
}

inline void require_prime(std::uint64_t q, const char* what) {
    if (!arith::is_prime_trial(q)) throw InvalidArgument(std::string(what) + ": q = " + std::to_string(q) + " is not prime");
}

}  // namespace detail

/// E x E y (x*d = a & y*d = b & x < y): the fraction a/d lies below b/d.
inline Formula frac_lt(std::uint64_t a, std::uint64_t b, std::uint64_t d) {
    if (a == 0 || b == 0 || d == 0) throw InvalidArgument("frac_lt: a, b, d must be positive");
    using detail::lit;
    return logic::exists("x", logic::exists("y", logic::eq(Term("x") * lit(d), lit(a)) &&
                                                    logic::eq(Term("y") * lit(d), lit(b)) &&
                                                    logic::lt("x", "y")));
}

/// (a < d) & the conjunction of (d-a)/d < r/d over 0 < r < d, r != d-a.
/// For primes p > d: Z_p satisfies it iff p = a (mod d).
inline Sentence congruence_sentence(std::uint64_t a, std::uint64_t d) {
    if (a == 0 || a >= d) throw InvalidArgument("congruence_sentence: need 0 < a < d");
    Formula f = logic::lt(detail::lit(a), detail::lit(d));
    for (std::uint64_t r = 1; r < d; ++r)
        if (r != d - a) f = f && frac_lt(d - a, r, d);
    return Sentence(f);
}

/// Term sum of c*x^k over the given coefficients; zero if there are none.
inline Term polynomial_term(const std::vector<std::pair<std::uint64_t, std::uint64_t>>& monomials, const Term& x) {
    std::vector<Term> parts;
    for (const auto& [c, k] : monomials) {
        if (k == 0) parts.push_back(detail::lit(c));
        else if (c == 1) parts.push_back(detail::power(x, k));
        else parts.push_back(detail::lit(c) * detail::power(x, k));
    }
    if (parts.empty()) return Term::zero();
    Term t = parts.front();
    for (std::size_t i = 1; i < parts.size(); ++i) t = t + parts[i];
    return t;
}

/// E x. f(x) = 0 with positive coefficients on the left and the magnitudes of
/// negative ones on the right, highest degree first.
inline Sentence root_sentence(const arith::IntPolynomial& f) {
    if (f.is_zero()) throw InvalidArgument("root_sentence: zero polynomial");
    std::vector<std::pair<std::uint64_t, std::uint64_t>> pos, neg;
    for (int k = f.degree(); k >= 0; --k) {
        const arith::BigInt& c = f.coeff(static_cast<std::size_t>(k));
        if (c == 0) continue;
        const arith::BigInt mag = c < 0 ? arith::BigInt(-c) : c;
        if (mag > arith::BigInt(std::numeric_limits<std::uint64_t>::max()))
            throw InvalidArgument("root_sentence: coefficient exceeds 64 bits");
        (c > 0 ? pos : neg).push_back({mag.convert_to<std::uint64_t>(), static_cast<std::uint64_t>(k)});
    }
    return Sentence(logic::exists("x", logic::eq(polynomial_term(pos, "x"), polynomial_term(neg, "x"))));
}

/// E x. F_n(x) = 0.
inline Sentence cyclotomic_sentence(std::uint64_t n) {
    if (n < 2) throw InvalidArgument("cyclotomic_sentence: need n >= 2");
    return root_sentence(arith::cyclotomic(n));
}

/// E[r,q] x. x = x: the universe size is r mod q.
inline Sentence mod_count_sentence(std::uint64_t r, std::uint64_t q) {
    if (q < 2 || r >= q) throw InvalidArgument("mod_count_sentence: need 0 <= r < q, q >= 2");
    return Sentence(Formula::mod_exists(r, q, "x", logic::eq("x", "x")));
}

/// E x. F_n(x) = 0  &  E[r,d] y (!(y = 0) & E z. z^n = y).
/// Counts nonzero n-th powers, so for almost all p it holds iff p = rn+1 (mod nd).
inline Sentence power_residue_sentence(std::uint64_t n, std::uint64_t d, std::uint64_t r) {
    if (n < 2 || d < 2 || r >= d) throw InvalidArgument("power_residue_sentence: need n, d > 1 and 0 <= r < d");
    Formula root = cyclotomic_sentence(n).formula();
    Formula powers = Formula::mod_exists(
        r, d, "y", logic::ne("y", Term::zero()) && logic::exists("z", logic::eq(detail::power("z", n), "y")));
    return Sentence(root && powers);
}

/// A x (!(x = 0) -> E y. x*y = 1): every nonzero element is invertible.
inline Sentence prime_sentence() {
    return Sentence(logic::forall("x", logic::implies(logic::ne("x", Term::zero()),
                                                      logic::exists("y", logic::eq(Term("x") * Term("y"), 1)))));
}

/// z is a power of q: every divisor of z other than 1 is divisible by q.
inline Formula exp_q(std::uint64_t q, const std::string& z) {
    auto n = detail::names_avoiding({z}, 3);
    const std::string &x = n[0], &y = n[1], &w = n[2];
    return logic::forall(x, logic::implies(logic::exists(y, logic::times(x, y, z)) && logic::ne(x, 1),
                                           logic::exists(w, logic::times(detail::lit(q), w, x))));
}

/// z is the square of a power of q.
inline Formula exp_q2(std::uint64_t q, const std::string& z) {
    const std::string x = detail::names_avoiding({z}, 1)[0];
    return logic::exists(x, logic::times(x, x, z) && exp_q(q, x));
}

/// base(z) and no w > z satisfies base(w).
template <class Base>
Formula maximal(const Base& base, const std::string& z) {
    const std::string w = detail::names_avoiding({z}, 3)[2];
    return base(z) && logic::forall(w, logic::implies(logic::lt(z, w), !base(w)));
}

struct ExpFamily {
    Formula exp_q, exp_q2, maxexp_q, maxexp_q2;
};

/// EXP_q, EXP_{q^2}, MAXEXP_q, MAXEXP_{q^2}, each with free variable z.
inline ExpFamily exp_family(std::uint64_t q) {
    detail::require_prime(q, "exp_family");
    auto e1 = [q](const std::string& v) { return exp_q(q, v); };
    auto e2 = [q](const std::string& v) { return exp_q2(q, v); };
    return {e1("z"), e2("z"), maximal(e1, "z"), maximal(e2, "z")};
}

/// PRIME & E z (MAXEXP_q(z) & MAXEXP_{q^2}(z)).
/// For primes p > q: holds iff q^(2n) < p < q^(2n+1) for some n >= 0.
inline Sentence psi_sentence(std::uint64_t q) {
    ExpFamily fam = exp_family(q);
    return Sentence(prime_sentence().formula() && logic::exists("z", fam.maxexp_q && fam.maxexp_q2));
}

/// z is a power of q and the number of powers of q below z (counting 1) is a
/// power of q; with `square`, that number must also be a perfect square.
inline Formula supexp(std::uint64_t q, const std::string& z, bool square) {
    auto n = detail::names_avoiding({z}, 5);
    const std::string &i = n[0], &y = n[1], &j = n[2], &k = n[3], &h = n[4];
    Formula below = logic::count_exact(Term(i), y, logic::lt(y, z) && exp_q(q, y));
    Formula power_of_q = logic::forall(
        j, logic::implies(logic::ne(j, 1) && logic::exists(k, logic::times(k, j, i)),
                          logic::exists(h, logic::times(detail::lit(q), h, j))));
    Formula bracket = below && power_of_q;
    if (square) bracket = bracket && logic::exists(k, logic::times(k, k, i));
    return exp_q(q, z) && logic::exists(i, bracket);
}

struct SupExpFamily {
    Formula supexp_q, supexp_q2, supmaxexp_q, supmaxexp_q2;
};

inline SupExpFamily supexp_family(std::uint64_t q) {
    detail::require_prime(q, "supexp_family");
    auto s1 = [q](const std::string& v) { return supexp(q, v, false); };
    auto s2 = [q](const std::string& v) { return supexp(q, v, true); };
    return {s1("z"), s2("z"), maximal(s1, "z"), maximal(s2, "z")};
}

/// PRIME & E z (SUPMAXEXP_q(z) & SUPMAXEXP_{q^2}(z)).
inline Sentence theta_sentence(std::uint64_t q) {
    SupExpFamily fam = supexp_family(q);
    return Sentence(prime_sentence().formula() && logic::exists("z", fam.supmaxexp_q && fam.supmaxexp_q2));
}

/// A built sentence with its parameters and validity precondition.
struct SentenceFamily {
    std::string name;
    std::map<std::string, std::uint64_t> params;
    Sentence sentence;
    std::string precondition;
    /// Primes at or below this are outside the precondition.
    std::uint64_t min_prime = 0;
};

inline std::uint64_t param(const std::map<std::string, std::uint64_t>& p, const std::string& key) {
    auto it = p.find(key);
    if (it == p.end()) throw InvalidArgument("missing parameter '" + key + "'");
    return it->second;
}

/// Builds a family by name: congruence(a,d), cyclotomic(n), modcount(r,q),
/// powres(n,d,r), psi(q), theta(q), prime().
inline SentenceFamily build_family(const std::string& name, const std::map<std::string, std::uint64_t>& p) {
    if (name == "congruence") {
        const auto a = param(p, "a"), d = param(p, "d");
        return {name, p, congruence_sentence(a, d), "p > d", d};
    }
    if (name == "cyclotomic") {
        const auto n = param(p, "n");
        return {name, p, cyclotomic_sentence(n), "primes dividing n are exceptional", n};
    }
    if (name == "modcount") {
        const auto r = param(p, "r"), q = param(p, "q");
        return {name, p, mod_count_sentence(r, q), "p > q", q};
    }
    if (name == "powres") {
        const auto n = param(p, "n"), d = param(p, "d"), r = param(p, "r");
        return {name, p, power_residue_sentence(n, d, r), "p > nd", n * d};
    }
    if (name == "psi") {
        const auto q = param(p, "q");
        return {name, p, psi_sentence(q), "q prime, p > q", q};
    }
    if (name == "theta") {
        const auto q = param(p, "q");
        return {name, p, theta_sentence(q), "q prime, p > q", q};
    }
    if (name == "prime") return {name, p, prime_sentence(), "none", 0};
    throw InvalidArgument("unknown family '" + name + "'");
}

}  // namespace ringspectra::constructions
