#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "ringspectra/error.hpp"
#include "ringspectra/eval/context.hpp"

namespace ringspectra::eval {

namespace detail {

// Thrown by relation operations when a result would exceed the tuple budget;
// the evaluator turns it into ResourceLimit naming the subformula.
struct BudgetExceeded {
    std::uint64_t rows;
};

inline void check_budget(std::uint64_t rows, std::uint64_t budget) {
    if (rows > budget) throw BudgetExceeded{rows};
}

// m^k, saturating
inline std::uint64_t power_sat(std::uint64_t m, std::size_t k) {
    std::uint64_t r = 1;
    for (std::size_t i = 0; i < k; ++i) {
        if (m != 0 && r > std::numeric_limits<std::uint64_t>::max() / m) return std::numeric_limits<std::uint64_t>::max();
        r *= m;
    }
    return r;
}

}  // namespace detail

/// A finite set of assignments over named columns, stored as flat rows.
/// After normalize() rows are sorted lexicographically and distinct.
class Relation {
public:
    Relation() = default;
    explicit Relation(std::vector<std::string> cols) : cols_(std::move(cols)) {}

    /// The zero-column relation holding the empty assignment (truth).
    static Relation unit() {
        Relation r;
        r.n_ = 1;
        return r;
    }

    const std::vector<std::string>& columns() const noexcept { return cols_; }
    std::size_t arity() const noexcept { return cols_.size(); }
    std::size_t size() const noexcept { return n_; }
    bool empty() const noexcept { return n_ == 0; }
    /// For a zero-column relation: whether it holds the empty assignment.
    bool truth() const noexcept { return n_ > 0; }

    const Residue* row(std::size_t i) const noexcept { return data_.data() + i * cols_.size(); }
    const std::vector<Residue>& data() const noexcept { return data_; }

    int column_index(const std::string& name) const {
        for (std::size_t i = 0; i < cols_.size(); ++i)
            if (cols_[i] == name) return static_cast<int>(i);
        return -1;
    }

    void push_row(const Residue* vals) {
        data_.insert(data_.end(), vals, vals + cols_.size());
        ++n_;
    }
    void push_row(const std::vector<Residue>& vals) { push_row(vals.data()); }
    void reserve(std::size_t rows) { data_.reserve(rows * cols_.size()); }
    /// Appends the rows of a relation with identical columns.
    void append(const Relation& other) {
        if (other.cols_ != cols_) throw InvalidArgument("append: column mismatch");
        data_.insert(data_.end(), other.data_.begin(), other.data_.end());
        n_ += other.n_;
    }
    void clear() {
        data_.clear();
        n_ = 0;
    }

    std::vector<std::vector<Residue>> tuples() const {
        std::vector<std::vector<Residue>> out;
        out.reserve(n_);
        for (std::size_t i = 0; i < n_; ++i) out.emplace_back(row(i), row(i) + arity());
        return out;
    }

    void rename(std::vector<std::string> cols) {
        if (cols.size() != cols_.size()) throw InvalidArgument("rename: arity mismatch");
        cols_ = std::move(cols);
    }

    void normalize() {
        const std::size_t k = arity();
        if (k == 0) {
            n_ = std::min<std::size_t>(n_, 1);
            return;
        }
        if (k == 1) {
            std::sort(data_.begin(), data_.end());
            data_.erase(std::unique(data_.begin(), data_.end()), data_.end());
            n_ = data_.size();
            return;
        }
        if (k == 2) {
            std::vector<std::uint64_t> packed(n_);
            for (std::size_t i = 0; i < n_; ++i)
                packed[i] = (std::uint64_t{data_[2 * i]} << 32) | data_[2 * i + 1];
            std::sort(packed.begin(), packed.end());
            packed.erase(std::unique(packed.begin(), packed.end()), packed.end());
            n_ = packed.size();
            data_.resize(2 * n_);
            for (std::size_t i = 0; i < n_; ++i) {
                data_[2 * i] = static_cast<Residue>(packed[i] >> 32);
                data_[2 * i + 1] = static_cast<Residue>(packed[i]);
            }
            return;
        }
        std::vector<std::uint32_t> idx(n_);
        std::iota(idx.begin(), idx.end(), 0u);
        auto less = [&](std::uint32_t a, std::uint32_t b) {
            return std::lexicographical_compare(row(a), row(a) + k, row(b), row(b) + k);
        };
        std::sort(idx.begin(), idx.end(), less);
        std::vector<Residue> out;
        out.reserve(data_.size());
        std::size_t kept = 0;
        for (std::size_t i = 0; i < n_; ++i) {
            const Residue* r = row(idx[i]);
            if (kept > 0 && std::equal(r, r + k, out.end() - static_cast<std::ptrdiff_t>(k))) continue;
            out.insert(out.end(), r, r + k);
            ++kept;
        }
        data_ = std::move(out);
        n_ = kept;
    }

    /// Columns permuted (or dropped) to `cols`; the result is normalized.
    Relation project(const std::vector<std::string>& cols) const {
        std::vector<std::size_t> pos;
        for (const auto& c : cols) {
            int i = column_index(c);
            if (i < 0) throw InvalidArgument("project: unknown column '" + c + "'");
            pos.push_back(static_cast<std::size_t>(i));
        }
        Relation out(cols);
        out.data_.resize(n_ * cols.size());
        for (std::size_t r = 0; r < n_; ++r)
            for (std::size_t j = 0; j < pos.size(); ++j) out.data_[r * cols.size() + j] = row(r)[pos[j]];
        out.n_ = n_;
        out.normalize();
        return out;
    }

    /// Columns in name order, rows normalized.
    Relation sorted_columns() const {
        std::vector<std::string> cols = cols_;
        std::sort(cols.begin(), cols.end());
        return project(cols);
    }

    /// Membership of a full row; requires normalized rows.
    bool contains(const Residue* vals) const {
        const std::size_t k = arity();
        if (k == 0) return n_ > 0;
        std::size_t lo = 0, hi = n_;
        while (lo < hi) {
            std::size_t mid = (lo + hi) / 2;
            if (std::lexicographical_compare(row(mid), row(mid) + k, vals, vals + k)) lo = mid + 1;
            else hi = mid;
        }
        return lo < n_ && std::equal(row(lo), row(lo) + k, vals);
    }
    bool contains(const std::vector<Residue>& vals) const { return contains(vals.data()); }

    friend bool operator==(const Relation& a, const Relation& b) {
        return a.cols_ == b.cols_ && a.n_ == b.n_ && a.data_ == b.data_;
    }

private:
    std::vector<std::string> cols_;
    std::vector<Residue> data_;
    std::size_t n_ = 0;
};

using SparseRelation = Relation;

/// Natural join by sort-merge on shared columns. Output columns: shared, then
/// the rest of a, then the rest of b.
inline Relation join(const Relation& a, const Relation& b, std::uint64_t budget) {
    std::vector<std::string> shared, a_rest, b_rest;
    for (const auto& c : a.columns()) (b.column_index(c) >= 0 ? shared : a_rest).push_back(c);
    for (const auto& c : b.columns())
        if (a.column_index(c) < 0) b_rest.push_back(c);

    auto concat = [](std::vector<std::string> x, const std::vector<std::string>& y) {
        x.insert(x.end(), y.begin(), y.end());
        return x;
    };
    Relation left = a.project(concat(shared, a_rest));
    Relation right = b.project(concat(shared, b_rest));
    std::vector<std::string> out_cols = concat(concat(shared, a_rest), b_rest);
    Relation out(out_cols);

    const std::size_t k = shared.size(), ka = left.arity(), kb = right.arity();
    std::vector<Residue> buf(out_cols.size());
    auto cmp = [k](const Residue* x, const Residue* y) {
        for (std::size_t i = 0; i < k; ++i)
            if (x[i] != y[i]) return x[i] < y[i] ? -1 : 1;
        return 0;
    };
    std::size_t i = 0, j = 0;
    while (i < left.size() && j < right.size()) {
        int c = cmp(left.row(i), right.row(j));
        if (c < 0) {
            ++i;
        } else if (c > 0) {
            ++j;
        } else {
            std::size_t i_end = i, j_end = j;
            while (i_end < left.size() && cmp(left.row(i_end), left.row(i)) == 0) ++i_end;
            while (j_end < right.size() && cmp(right.row(j_end), right.row(j)) == 0) ++j_end;
            detail::check_budget(out.size() + (i_end - i) * (j_end - j), budget);
            for (std::size_t x = i; x < i_end; ++x) {
                std::copy(left.row(x), left.row(x) + ka, buf.begin());
                for (std::size_t y = j; y < j_end; ++y) {
                    std::copy(right.row(y) + k, right.row(y) + kb, buf.begin() + static_cast<std::ptrdiff_t>(ka));
                    out.push_row(buf);
                }
            }
            i = i_end;
            j = j_end;
        }
    }
    return out;
}

/// All assignments over r's columns not in r; r must be normalized.
inline Relation complement(const Relation& r, std::uint64_t m, std::uint64_t budget) {
    const std::size_t k = r.arity();
    Relation out(r.columns());
    if (k == 0) {
        if (!r.truth()) out.push_row(nullptr);
        return out;
    }
    const std::uint64_t total = detail::power_sat(m, k);
    detail::check_budget(total - std::min<std::uint64_t>(total, r.size()), budget);
    std::vector<Residue> cur(k, 0);
    std::size_t next = 0;
    for (std::uint64_t n = 0; n < total; ++n) {
        if (next < r.size() && std::equal(cur.begin(), cur.end(), r.row(next))) ++next;
        else out.push_row(cur);
        for (std::size_t pos = k; pos-- > 0;) {
            if (++cur[pos] < m) break;
            cur[pos] = 0;
        }
    }
    return out;
}

/// r extended by every value of each extra column.
inline Relation cross_extend(const Relation& r, const std::vector<std::string>& extra, std::uint64_t m,
                             std::uint64_t budget) {
    std::vector<std::string> cols = r.columns();
    cols.insert(cols.end(), extra.begin(), extra.end());
    Relation out(cols);
    const std::uint64_t per = detail::power_sat(m, extra.size());
    if (r.size() != 0 && per > budget / r.size() + 1) throw detail::BudgetExceeded{per};
    detail::check_budget(r.size() * per, budget);
    out.reserve(r.size() * per);
    std::vector<Residue> buf(cols.size());
    const std::size_t k = r.arity();
    for (std::size_t i = 0; i < r.size(); ++i) {
        std::copy(r.row(i), r.row(i) + k, buf.begin());
        std::fill(buf.begin() + static_cast<std::ptrdiff_t>(k), buf.end(), 0);
        for (std::uint64_t n = 0; n < per; ++n) {
            out.push_row(buf);
            for (std::size_t pos = cols.size(); pos-- > k;) {
                if (++buf[pos] < m) break;
                buf[pos] = 0;
            }
        }
    }
    return out;
}

}  // namespace ringspectra::eval
