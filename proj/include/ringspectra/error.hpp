#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ringspectra {

/// Bad argument to a library operation (out-of-range parameter, mismatched bounds, ...).
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Polynomial vanishes identically after reduction modulo p.
class DegeneratePolynomial : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Denominator has no inverse modulo p.
class NoInverse : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Concrete-syntax error, with the 1-based position where it was detected.
class SyntaxError : public std::runtime_error {
public:
    SyntaxError(const std::string& msg, std::size_t line, std::size_t column)
        : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + msg),
          line_(line),
          column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

/// Well-formed text that violates a semantic rule (e.g. E[r,q] with r >= q).
class SemanticError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Evaluation failure: unbound variable, open sentence, ...
class EvalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A configured resource cap (tuple budget, sieve bound) would be exceeded.
class ResourceLimit : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace ringspectra
