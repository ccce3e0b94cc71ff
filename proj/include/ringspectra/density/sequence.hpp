#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "ringspectra/error.hpp"

namespace ringspectra::density {

/// s_1 < s_2 < ..., indexed from 1. Geometric and double-exponential
/// sequences can produce terms past kmax on demand; explicit ones cannot.
class Sequence {
public:
    enum class Kind { Geometric, DoubleExp, Explicit };

    /// s_n = q^n for n = 1..kmax.
    static Sequence geometric(std::uint64_t q, std::size_t kmax) {
        if (q < 2) throw InvalidArgument("geometric sequence needs q >= 2");
        return Sequence(Kind::Geometric, q, kmax, {});
    }

    /// s_n = q^(q^n) for n = 1..kmax; only terms below 2^64 are materialized.
    static Sequence doubleexp(std::uint64_t q, std::size_t kmax) {
        if (q < 2) throw InvalidArgument("doubleexp sequence needs q >= 2");
        return Sequence(Kind::DoubleExp, q, kmax, {});
    }

    static Sequence explicit_terms(std::vector<std::uint64_t> terms) {
        for (std::size_t i = 1; i < terms.size(); ++i)
            if (terms[i] <= terms[i - 1]) throw InvalidArgument("sequence must be strictly increasing");
        const std::size_t k = terms.size();
        return Sequence(Kind::Explicit, 0, k, std::move(terms));
    }

    /// "geometric:q:kmax" or "doubleexp:q:kmax".
    static Sequence parse(const std::string& spec) {
        const auto a = spec.find(':');
        const auto b = a == std::string::npos ? a : spec.find(':', a + 1);
        if (b == std::string::npos) throw InvalidArgument("sequence '" + spec + "': expected kind:q:kmax");
        const std::string kind = spec.substr(0, a);
        std::uint64_t q = 0, kmax = 0;
        try {
            q = std::stoull(spec.substr(a + 1, b - a - 1));
            kmax = std::stoull(spec.substr(b + 1));
        } catch (const std::exception&) {
            throw InvalidArgument("sequence '" + spec + "': q and kmax must be natural numbers");
        }
        if (kind == "geometric") return geometric(q, kmax);
        if (kind == "doubleexp") return doubleexp(q, kmax);
        throw InvalidArgument("sequence '" + spec + "': unknown kind '" + kind + "'");
    }

    Kind kind() const noexcept { return kind_; }
    std::uint64_t base() const noexcept { return q_; }
    std::size_t kmax() const noexcept { return kmax_; }

    std::string describe() const {
        switch (kind_) {
            case Kind::Geometric: return "geometric:" + std::to_string(q_) + ":" + std::to_string(kmax_);
            case Kind::DoubleExp: return "doubleexp:" + std::to_string(q_) + ":" + std::to_string(kmax_);
            case Kind::Explicit: break;
        }
        return "explicit:" + std::to_string(kmax_);
    }

    /// s_n if n <= kmax and it fits in 64 bits.
    std::optional<std::uint64_t> term(std::size_t n) const {
        if (n == 0 || n > kmax_) return std::nullopt;
        return generate(n);
    }

    /// s_n ignoring kmax, for generated kinds.
    std::optional<std::uint64_t> generate(std::size_t n) const {
        if (n == 0) return std::nullopt;
        switch (kind_) {
            case Kind::Explicit: return n <= terms_.size() ? std::optional(terms_[n - 1]) : std::nullopt;
            case Kind::Geometric: return checked_pow(q_, n);
            case Kind::DoubleExp: {
                auto e = checked_pow(q_, n);
                return e ? checked_pow(q_, *e) : std::nullopt;
            }
        }
        return std::nullopt;
    }

    /// Materialized terms, s_1 first.
    std::vector<std::uint64_t> terms() const {
        std::vector<std::uint64_t> out;
        for (std::size_t n = 1; n <= kmax_; ++n) {
            auto t = term(n);
            if (!t) break;
            out.push_back(*t);
        }
        return out;
    }

    /// log s_n, defined for every n <= kmax even when s_n overflows.
    double log_term(std::size_t n) const {
        if (n == 0 || n > kmax_) throw InvalidArgument("sequence index " + std::to_string(n) + " out of range");
        const double lq = std::log(static_cast<double>(q_));
        switch (kind_) {
            case Kind::Geometric: return static_cast<double>(n) * lq;
            case Kind::DoubleExp: return std::pow(static_cast<double>(q_), static_cast<double>(n)) * lq;
            case Kind::Explicit: break;
        }
        return std::log(static_cast<double>(terms_[n - 1]));
    }

private:
    Sequence(Kind k, std::uint64_t q, std::size_t kmax, std::vector<std::uint64_t> terms)
        : kind_(k), q_(q), kmax_(kmax), terms_(std::move(terms)) {}

    static std::optional<std::uint64_t> checked_pow(std::uint64_t b, std::uint64_t e) {
        std::uint64_t r = 1;
        for (std::uint64_t i = 0; i < e; ++i) {
            if (r > std::numeric_limits<std::uint64_t>::max() / b) return std::nullopt;
            r *= b;
        }
        return r;
    }

    Kind kind_;
    std::uint64_t q_;
    std::size_t kmax_;
    std::vector<std::uint64_t> terms_;
};

}  // namespace ringspectra::density
