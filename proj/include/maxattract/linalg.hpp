#pragma once

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "maxattract/rational.hpp"

namespace maxattract {

using RVector = std::vector<Rational>;

/// Dense row-major matrix of exact rationals.
class RMatrix {
public:
    RMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols) {}

    static RMatrix from_rows(const std::vector<RVector>& rows) {
        if (rows.empty()) return RMatrix(0, 0);
        RMatrix m(rows.size(), rows.front().size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != m.cols_)
                throw std::invalid_argument("RMatrix::from_rows: ragged rows");
            for (std::size_t j = 0; j < m.cols_; ++j) m.at(i, j) = rows[i][j];
        }
        return m;
    }

    static RMatrix identity(std::size_t n) {
        RMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    Rational& at(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Rational& at(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    RMatrix transposed() const {
        RMatrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
        return t;
    }

private:
    std::size_t rows_, cols_;
    std::vector<Rational> data_;
};

namespace detail {

/// Scales a row by the lcm of its denominators. Positive row scaling
/// preserves rank and, on augmented systems, the solution set.
inline std::vector<BigInt> integer_row(const RVector& row) {
    BigInt l = 1;
    for (const auto& r : row) l = boost::multiprecision::lcm(l, r.denominator());
    std::vector<BigInt> out(row.size());
    for (std::size_t j = 0; j < row.size(); ++j)
        out[j] = row[j].numerator() * (l / row[j].denominator());
    return out;
}

/// Divides the row by the gcd of its entries (content removal) and makes
/// the first nonzero entry positive.
inline void normalize_content(std::vector<BigInt>& v) {
    BigInt g = 0;
    for (const auto& e : v) g = boost::multiprecision::gcd(g, e);
    if (g == 0) return;
    std::size_t lead = 0;
    while (v[lead] == 0) ++lead;
    if (v[lead] < 0) g = -g;
    for (auto& e : v) e /= g;
}

/// Incremental fraction-free row reduction over the integers. Rows are
/// inserted one at a time; rank() is the number of independent rows seen.
class IntRowBasis {
public:
    explicit IntRowBasis(std::size_t dim) : dim_(dim) {}

    /// Returns true when the row is independent of the rows inserted so far.
    bool insert(std::vector<BigInt> v) {
        if (v.size() != dim_) throw std::invalid_argument("IntRowBasis: dimension mismatch");
        for (std::size_t k = 0; k < rows_.size(); ++k) {
            const std::size_t l = leads_[k];
            if (v[l] == 0) continue;
            const BigInt a = rows_[k][l];
            const BigInt b = v[l];
            for (std::size_t j = 0; j < dim_; ++j) v[j] = v[j] * a - rows_[k][j] * b;
            normalize_content(v);
        }
        std::size_t lead = 0;
        while (lead < dim_ && v[lead] == 0) ++lead;
        if (lead == dim_) return false;
        normalize_content(v);
        auto pos = std::upper_bound(leads_.begin(), leads_.end(), lead) - leads_.begin();
        rows_.insert(rows_.begin() + pos, std::move(v));
        leads_.insert(leads_.begin() + pos, lead);
        return true;
    }

    bool insert(const RVector& v) { return insert(integer_row(v)); }

    std::size_t rank() const { return rows_.size(); }
    std::size_t dim() const { return dim_; }

private:
    std::size_t dim_;
    std::vector<std::vector<BigInt>> rows_;  // echelon rows, sorted by lead column
    std::vector<std::size_t> leads_;
};

/// Fraction-free (Bareiss) row echelon reduction of an integer matrix in
/// place. Returns the pivot columns in elimination order. Divisions by the
/// previous pivot are exact; intermediate entries stay minor-sized.
inline std::vector<std::size_t> bareiss_echelon(std::vector<std::vector<BigInt>>& m,
                                                std::size_t cols) {
    std::vector<std::size_t> pivot_cols;
    BigInt prev = 1;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < m.size(); ++c) {
        std::size_t p = r;
        while (p < m.size() && m[p][c] == 0) ++p;
        if (p == m.size()) continue;
        std::swap(m[p], m[r]);
        for (std::size_t i = r + 1; i < m.size(); ++i) {
            for (std::size_t j = c + 1; j < m[i].size(); ++j) {
                m[i][j] = (m[i][j] * m[r][c] - m[i][c] * m[r][j]) / prev;
            }
            m[i][c] = 0;
        }
        prev = m[r][c];
        pivot_cols.push_back(c);
        ++r;
    }
    return pivot_cols;
}

}  // namespace detail

/// Exact rank via fraction-free elimination.
inline std::size_t rank(const RMatrix& m) {
    if (m.rows() == 0 || m.cols() == 0) return 0;
    std::vector<std::vector<BigInt>> rows(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        RVector row(m.cols());
        for (std::size_t j = 0; j < m.cols(); ++j) row[j] = m.at(i, j);
        rows[i] = detail::integer_row(row);
    }
    return detail::bareiss_echelon(rows, m.cols()).size();
}

/// Maximum number of affinely independent points in the sequence:
/// 1 + rank of the differences to the first point.
inline std::size_t affine_rank(const std::vector<RVector>& points) {
    if (points.empty()) throw std::invalid_argument("affine_rank: empty point set");
    const std::size_t dim = points.front().size();
    detail::IntRowBasis basis(dim);
    for (std::size_t k = 1; k < points.size(); ++k) {
        if (points[k].size() != dim)
            throw std::invalid_argument("affine_rank: dimension mismatch");
        RVector diff(dim);
        for (std::size_t j = 0; j < dim; ++j) diff[j] = points[k][j] - points[0][j];
        basis.insert(diff);
        if (basis.rank() == dim) break;  // cannot grow past dim
    }
    return basis.rank() + 1;
}

enum class SolveStatus { Unique, Inconsistent, Underdetermined };

struct SolveResult {
    SolveStatus status;
    RVector solution;  // populated iff status == Unique
};

/// Solves A x = b exactly. Reports Inconsistent / Underdetermined
/// explicitly instead of guessing.
inline SolveResult solve_linear(const RMatrix& a, const RVector& b) {
    if (a.rows() != b.size()) throw std::invalid_argument("solve_linear: dimension mismatch");
    const std::size_t n = a.cols();
    std::vector<std::vector<BigInt>> aug(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        RVector row(n + 1);
        for (std::size_t j = 0; j < n; ++j) row[j] = a.at(i, j);
        row[n] = b[i];
        aug[i] = detail::integer_row(row);
    }
    auto pivots = detail::bareiss_echelon(aug, n);
    for (std::size_t i = pivots.size(); i < aug.size(); ++i) {
        if (aug[i][n] != 0) return {SolveStatus::Inconsistent, {}};
    }
    if (pivots.size() < n) return {SolveStatus::Underdetermined, {}};
    RVector x(n);
    for (std::size_t k = n; k-- > 0;) {
        const std::size_t c = pivots[k];
        Rational acc(aug[k][n]);
        for (std::size_t j = c + 1; j < n; ++j) acc -= Rational(aug[k][j]) * x[j];
        x[c] = acc / Rational(aug[k][c]);
    }
    return {SolveStatus::Unique, std::move(x)};
}

}  // namespace maxattract
