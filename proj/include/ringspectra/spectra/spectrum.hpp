#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "ringspectra/arith/polynomial.hpp"
#include "ringspectra/arith/primes.hpp"
#include "ringspectra/arith/roots.hpp"
#include "ringspectra/error.hpp"
#include "ringspectra/eval/engine.hpp"
#include "ringspectra/logic/ast.hpp"

namespace ringspectra::spectra {

/// Largest prime bound accepted by spectrum computations.
inline constexpr std::uint64_t kMaxBound = 5'000'000;

inline void check_bound(std::uint64_t bound) {
    if (bound < 2) throw InvalidArgument("spectrum bound must be >= 2, got " + std::to_string(bound));
    if (bound > kMaxBound)
        throw ResourceLimit("spectrum bound " + std::to_string(bound) + " exceeds the cap " + std::to_string(kMaxBound));
}

/// A set of primes up to a bound, one membership bit per prime.
class Spectrum {
public:
    Spectrum(std::shared_ptr<const arith::PrimeTable> table, std::uint64_t bound)
        : table_(std::move(table)), bound_(bound) {
        if (!table_) throw InvalidArgument("Spectrum: null prime table");
        if (bound_ < 2 || bound_ > table_->bound())
            throw InvalidArgument("Spectrum: bound " + std::to_string(bound_) + " outside the sieve range");
        bits_.assign(table_->pi(bound_), 0);
    }

    explicit Spectrum(std::uint64_t bound) : Spectrum((check_bound(bound), arith::sieve(bound)), bound) {}

    /// The primes p <= bound with pred(p).
    template <class Pred>
    static Spectrum from_predicate(std::uint64_t bound, Pred pred) {
        Spectrum s(bound);
        for (std::size_t i = 0; i < s.size(); ++i) s.bits_[i] = pred(s.prime(i)) ? 1 : 0;
        return s;
    }

    /// Spectrum containing exactly the listed primes (each must be a prime <= bound).
    static Spectrum from_members(std::uint64_t bound, const std::vector<std::uint64_t>& members) {
        Spectrum s(bound);
        for (std::uint64_t p : members) s.insert(p);
        return s;
    }

    std::uint64_t bound() const noexcept { return bound_; }
    /// pi(bound): the number of primes the bits range over.
    std::size_t size() const noexcept { return bits_.size(); }
    std::uint64_t prime(std::size_t i) const { return (*table_)[i]; }
    bool member(std::size_t i) const { return bits_.at(i) != 0; }
    void set(std::size_t i, bool v) { bits_.at(i) = v ? 1 : 0; }
    const std::shared_ptr<const arith::PrimeTable>& table() const noexcept { return table_; }

    bool contains(std::uint64_t p) const {
        if (p > bound_) return false;
        const std::size_t i = table_->index_of(p);
        return i < bits_.size() && bits_[i] != 0;
    }

    void insert(std::uint64_t p) {
        const std::size_t i = p <= bound_ ? table_->index_of(p) : bits_.size();
        if (i >= bits_.size()) throw InvalidArgument(std::to_string(p) + " is not a prime <= " + std::to_string(bound_));
        bits_[i] = 1;
    }

    std::vector<std::uint64_t> members() const {
        std::vector<std::uint64_t> out;
        for (std::size_t i = 0; i < bits_.size(); ++i)
            if (bits_[i]) out.push_back(prime(i));
        return out;
    }

    std::size_t count() const { return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), 1)); }

    /// Members <= x.
    std::size_t count_upto(std::uint64_t x) const {
        const std::size_t n = x >= bound_ ? bits_.size() : static_cast<std::size_t>(table_->pi(x));
        return static_cast<std::size_t>(std::count(bits_.begin(), bits_.begin() + static_cast<std::ptrdiff_t>(n), 1));
    }

    /// Running member counts: out[i] = members among the first i+1 primes.
    std::vector<std::uint64_t> cumulative() const {
        std::vector<std::uint64_t> out(bits_.size());
        std::uint64_t c = 0;
        for (std::size_t i = 0; i < bits_.size(); ++i) out[i] = c += bits_[i];
        return out;
    }

    friend bool operator==(const Spectrum& a, const Spectrum& b) { return a.bound_ == b.bound_ && a.bits_ == b.bits_; }

    friend Spectrum operator|(const Spectrum& a, const Spectrum& b) { return combine(a, b, [](int x, int y) { return x | y; }); }
    friend Spectrum operator&(const Spectrum& a, const Spectrum& b) { return combine(a, b, [](int x, int y) { return x & y; }); }
    friend Spectrum operator-(const Spectrum& a, const Spectrum& b) { return combine(a, b, [](int x, int y) { return x & !y; }); }

    /// Complement relative to the primes <= bound.
    Spectrum operator~() const {
        Spectrum s = *this;
        for (auto& b : s.bits_) b ^= 1;
        return s;
    }

private:
    template <class Op>
    static Spectrum combine(const Spectrum& a, const Spectrum& b, Op op) {
        if (a.bound_ != b.bound_)
            throw InvalidArgument("spectra have different bounds: " + std::to_string(a.bound_) + " vs " +
                                  std::to_string(b.bound_));
        Spectrum s = a;
        for (std::size_t i = 0; i < s.bits_.size(); ++i) s.bits_[i] = static_cast<std::uint8_t>(op(a.bits_[i], b.bits_[i]));
        return s;
    }

    std::shared_ptr<const arith::PrimeTable> table_;
    std::uint64_t bound_;
    std::vector<std::uint8_t> bits_;
};

inline Spectrum unite(const Spectrum& a, const Spectrum& b) { return a | b; }
inline Spectrum intersect(const Spectrum& a, const Spectrum& b) { return a & b; }
inline Spectrum complement(const Spectrum& a) { return ~a; }

/// {p <= bound : p = a (mod d)}.
inline Spectrum congruence_spectrum(std::uint64_t a, std::uint64_t d, std::uint64_t bound) {
    if (d == 0) throw InvalidArgument("congruence_spectrum: modulus must be positive");
    return Spectrum::from_predicate(bound, [&](std::uint64_t p) { return p % d == a % d; });
}

struct SpectrumOptions {
    std::size_t workers = 1;
    eval::Engine engine = eval::Engine::Auto;
    eval::FastOptions fast{};
};

namespace detail {

// Rethrows the active exception type with the prime prepended to its message.
[[noreturn]] inline void rethrow_at_prime(std::exception_ptr e, std::uint64_t p) {
    const std::string at = "in Z_" + std::to_string(p) + ": ";
    try {
        std::rethrow_exception(e);
    } catch (const ResourceLimit& x) {
        throw ResourceLimit(at + x.what());
    } catch (const EvalError& x) {
        throw EvalError(at + x.what());
    } catch (const InvalidArgument& x) {
        throw InvalidArgument(at + x.what());
    } catch (const SemanticError& x) {
        throw SemanticError(at + x.what());
    } catch (const DegeneratePolynomial& x) {
        throw DegeneratePolynomial(at + x.what());
    } catch (const std::exception& x) {
        throw EvalError(at + x.what());
    }
}

/// Runs test(i) for every prime index, spreading fixed chunks over workers.
/// Results land in their own slots, so the outcome is schedule-independent;
/// the error reported is the one at the smallest prime.
template <class Test>
void for_each_prime(Spectrum& s, std::size_t workers, Test test) {
    const std::size_t n = s.size();
    constexpr std::size_t chunk = 32;
    std::vector<std::uint8_t> out(n, 0);
    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> first_error{std::numeric_limits<std::size_t>::max()};
    std::vector<std::exception_ptr> errors((n + chunk - 1) / chunk);

    auto work = [&] {
        while (true) {
            const std::size_t c = next.fetch_add(1);
            const std::size_t lo = c * chunk;
            if (lo >= n || lo > first_error.load()) return;
            for (std::size_t i = lo; i < std::min(n, lo + chunk); ++i) {
                try {
                    out[i] = test(i) ? 1 : 0;
                } catch (...) {
                    errors[c] = std::current_exception();
                    std::size_t cur = first_error.load();
                    while (i < cur && !first_error.compare_exchange_weak(cur, i)) {
                    }
                    break;
                }
            }
        }
    };

    workers = std::max<std::size_t>(1, std::min(workers, (n + chunk - 1) / chunk));
    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    if (const std::size_t i = first_error.load(); i < n) rethrow_at_prime(errors[i / chunk], s.prime(i));
    for (std::size_t i = 0; i < n; ++i) s.set(i, out[i] != 0);
}

}  // namespace detail

/// Sp(s) up to bound: primes p with Z_p |= s.
inline Spectrum spectrum(const logic::Sentence& s, std::uint64_t bound, const SpectrumOptions& opt = {}) {
    Spectrum sp(bound);
    const eval::SentenceEvaluator holds(s, opt.engine, opt.fast);
    detail::for_each_prime(sp, opt.workers, [&](std::size_t i) { return holds(eval::RingContext(sp.prime(i))); });
    return sp;
}

/// Primes p <= bound at which f has a root. A polynomial vanishing
/// identically mod p has every residue as a root.
inline Spectrum poly_spectrum(const arith::IntPolynomial& f, std::uint64_t bound, std::size_t workers = 1) {
    if (f.degree() < 1) throw InvalidArgument("poly_spectrum: polynomial must be nonconstant");
    Spectrum sp(bound);
    detail::for_each_prime(sp, workers, [&](std::size_t i) {
        const std::uint64_t p = sp.prime(i);
        if (arith::reduce_mod(f, p).empty()) return true;
        return arith::has_root_mod(f, p);
    });
    return sp;
}

struct ExceptionReport {
    /// Symmetric difference, ascending.
    std::vector<std::uint64_t> exceptions;
    std::optional<std::uint64_t> largest;
    std::uint64_t threshold = 0;
    /// Every exception is below the threshold.
    bool plausibly_equal = true;
};

/// Finite-horizon evidence for S =* T: where the two disagree.
inline ExceptionReport almost_equal(const Spectrum& a, const Spectrum& b, std::uint64_t threshold = 100) {
    const Spectrum diff = (a - b) | (b - a);
    ExceptionReport r;
    r.exceptions = diff.members();
    r.threshold = threshold;
    if (!r.exceptions.empty()) r.largest = r.exceptions.back();
    r.plausibly_equal = !r.largest || *r.largest < threshold;
    return r;
}

}  // namespace ringspectra::spectra
