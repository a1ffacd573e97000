#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "maxattract/errors.hpp"
#include "maxattract/formulation.hpp"

namespace maxattract {
namespace detail {

/// A constraint system lowered to LP standard form: optimize over
/// { z >= 0 : sum a_ij z_j <= b_i }. Fixed variables (single-variable
/// equality rows) are substituted out; upper bounds become rows.
struct LoweredLp {
    int nvars = 0;
    std::vector<int> catalog_of;          // lowered var -> catalog index
    std::vector<int> lowered_index;       // catalog index -> lowered var or -1
    std::vector<Rational> fixed_value;    // catalog index -> value when not lowered
    std::vector<std::vector<std::pair<int, Rational>>> rows;
    std::vector<Rational> rhs;

    RVector full_assignment(const RVector& z) const {
        RVector out(lowered_index.size());
        for (std::size_t k = 0; k < lowered_index.size(); ++k)
            out[k] = lowered_index[k] >= 0 ? z[lowered_index[k]] : fixed_value[k];
        return out;
    }
};

inline LoweredLp lower_system(const ConstraintSystem& sys) {
    if (sys.has_binaries())
        throw std::invalid_argument("system still has binary variables; fix or relax them first");
    const int nc = sys.var_count();
    std::vector<std::optional<Rational>> fixed(nc);
    for (const auto& row : sys.rows()) {
        if (row.rel != Relation::Eq) continue;
        if (row.coeffs.size() != 1)
            throw std::invalid_argument("general equality rows are not supported");
        const auto& [k, coef] = row.coeffs.front();
        const Rational v = row.rhs / coef;
        if (fixed[k] && *fixed[k] != v) throw InfeasibleError();
        fixed[k] = v;
    }
    LoweredLp lp;
    lp.lowered_index.assign(nc, -1);
    lp.fixed_value.assign(nc, Rational(0));
    for (int k = 0; k < nc; ++k) {
        const auto& v = sys.var(k);
        if (fixed[k]) {
            if (*fixed[k] < v.lb || (v.ub && *fixed[k] > *v.ub)) throw InfeasibleError();
            lp.fixed_value[k] = *fixed[k];
            continue;
        }
        lp.lowered_index[k] = lp.nvars++;
        lp.catalog_of.push_back(k);
    }
    for (const auto& row : sys.rows()) {
        if (row.rel == Relation::Eq) continue;
        Rational rhs = row.rhs;
        std::vector<std::pair<int, Rational>> coeffs;
        for (const auto& [k, coef] : row.coeffs) {
            if (lp.lowered_index[k] >= 0)
                coeffs.emplace_back(lp.lowered_index[k], coef);
            else
                rhs -= coef * lp.fixed_value[k];
        }
        if (coeffs.empty()) {
            if (rhs < 0) throw InfeasibleError();
            continue;
        }
        lp.rows.push_back(std::move(coeffs));
        lp.rhs.push_back(std::move(rhs));
    }
    for (int t = 0; t < lp.nvars; ++t) {
        const auto& v = sys.var(lp.catalog_of[t]);
        if (v.ub) {
            lp.rows.push_back({{t, Rational(1)}});
            lp.rhs.push_back(*v.ub);
        }
    }
    return lp;
}

/// Iteratively pins variables that appear with nonnegative coefficients in
/// a zero-rhs <= row: together with z >= 0 such a row forces them to zero.
/// Shrinks closed-location patterns before vertex enumeration.
inline LoweredLp presolve_zeros(const LoweredLp& in) {
    const int n = in.nvars;
    std::vector<bool> zero(n, false);
    std::vector<bool> dead(in.rows.size(), false);
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t r = 0; r < in.rows.size(); ++r) {
            if (dead[r] || !in.rhs[r].is_zero()) continue;
            bool all_nonneg = true;
            for (const auto& [k, coef] : in.rows[r]) {
                if (!zero[k] && coef < 0) {
                    all_nonneg = false;
                    break;
                }
            }
            if (!all_nonneg) continue;
            for (const auto& [k, coef] : in.rows[r]) {
                if (!zero[k] && coef > 0) zero[k] = true;
            }
            dead[r] = true;
            changed = true;
        }
    }
    LoweredLp out;
    out.lowered_index = in.lowered_index;
    out.fixed_value = in.fixed_value;
    std::vector<int> remap(n, -1);
    for (int t = 0; t < n; ++t) {
        if (zero[t]) {
            out.lowered_index[in.catalog_of[t]] = -1;
            out.fixed_value[in.catalog_of[t]] = Rational(0);
            continue;
        }
        remap[t] = out.nvars++;
        out.catalog_of.push_back(in.catalog_of[t]);
        out.lowered_index[in.catalog_of[t]] = remap[t];
    }
    for (std::size_t r = 0; r < in.rows.size(); ++r) {
        if (dead[r]) continue;
        std::vector<std::pair<int, Rational>> coeffs;
        for (const auto& [k, coef] : in.rows[r])
            if (remap[k] >= 0) coeffs.emplace_back(remap[k], coef);
        if (coeffs.empty()) {
            if (in.rhs[r] < 0) throw InfeasibleError();
            continue;
        }
        out.rows.push_back(std::move(coeffs));
        out.rhs.push_back(in.rhs[r]);
    }
    return out;
}

/// Drops rows implied by another row under z >= 0: row r is redundant when
/// some row r' has componentwise coefficients >= those of r and rhs <= that
/// of r. Exact duplicates keep their first copy. The feasible set is
/// unchanged, but vertex enumeration loses a lot of basis degeneracy.
inline LoweredLp presolve_dominated_rows(const LoweredLp& in) {
    const std::size_t nr = in.rows.size();
    std::vector<RVector> dense(nr, RVector(in.nvars, Rational(0)));
    for (std::size_t r = 0; r < nr; ++r)
        for (const auto& [k, coef] : in.rows[r]) dense[r][k] = coef;
    std::vector<bool> drop(nr, false);
    for (std::size_t r = 0; r < nr; ++r) {
        if (drop[r]) continue;
        for (std::size_t s = 0; s < nr; ++s) {
            if (s == r || drop[s] || drop[r]) continue;
            bool dominates = in.rhs[s] <= in.rhs[r];
            for (int k = 0; dominates && k < in.nvars; ++k)
                dominates = !(dense[s][k] < dense[r][k]);
            if (!dominates) continue;
            bool identical = in.rhs[s] == in.rhs[r] && dense[s] == dense[r];
            if (identical && s > r) continue;  // the earlier copy does the dropping
            drop[r] = true;
        }
    }
    LoweredLp out;
    out.nvars = in.nvars;
    out.catalog_of = in.catalog_of;
    out.lowered_index = in.lowered_index;
    out.fixed_value = in.fixed_value;
    for (std::size_t r = 0; r < nr; ++r) {
        if (drop[r]) continue;
        out.rows.push_back(in.rows[r]);
        out.rhs.push_back(in.rhs[r]);
    }
    return out;
}

/// Simplex dictionary over exact rationals. Variable ids: 0..n-1 the
/// structural variables, n..n+m-1 the row slacks. Invariant:
/// basic_i = rhs_i - sum_j a[i][j] * nonbasic_j, with rhs >= 0 once a
/// feasible dictionary has been established.
class Dictionary {
public:
    explicit Dictionary(const LoweredLp& lp)
        : nstruct_(lp.nvars), nrows_(static_cast<int>(lp.rows.size())) {
        a_.assign(nrows_, RVector(nstruct_, Rational(0)));
        rhs_ = lp.rhs;
        nonbasic_.resize(nstruct_);
        basic_.resize(nrows_);
        for (int j = 0; j < nstruct_; ++j) nonbasic_[j] = j;
        for (int i = 0; i < nrows_; ++i) basic_[i] = nstruct_ + i;
        for (int i = 0; i < nrows_; ++i)
            for (const auto& [k, coef] : lp.rows[i]) a_[i][k] = coef;
    }

    static Dictionary from_raw(std::vector<RVector> a, RVector rhs, std::vector<int> basic,
                               std::vector<int> nonbasic) {
        Dictionary d;
        d.nstruct_ = static_cast<int>(nonbasic.size());
        d.nrows_ = static_cast<int>(basic.size());
        d.a_ = std::move(a);
        d.rhs_ = std::move(rhs);
        d.basic_ = std::move(basic);
        d.nonbasic_ = std::move(nonbasic);
        return d;
    }

    int col_count() const { return nstruct_; }
    int row_count() const { return nrows_; }
    int basic_var(int i) const { return basic_[i]; }
    int nonbasic_var(int j) const { return nonbasic_[j]; }
    const Rational& coeff(int i, int j) const { return a_[i][j]; }
    const Rational& rhs(int i) const { return rhs_[i]; }

    bool rhs_feasible() const {
        return std::all_of(rhs_.begin(), rhs_.end(), [](const Rational& v) { return !(v < 0); });
    }

    /// Current basic solution restricted to variables with ids < nvars.
    RVector structural_values(int nvars) const {
        RVector z(nvars, Rational(0));
        for (int i = 0; i < nrows_; ++i)
            if (basic_[i] < nvars) z[basic_[i]] = rhs_[i];
        return z;
    }

    /// Basis as a bitmask over variable ids; requires ids < 64.
    std::uint64_t basis_key() const {
        std::uint64_t key = 0;
        for (int i = 0; i < nrows_; ++i) key |= std::uint64_t{1} << basic_[i];
        return key;
    }

    /// The variable in column `col` enters the basis, the variable basic in
    /// `row` leaves (they swap places). Exact and self-inverse at the same
    /// (row, col) position.
    void pivot(int row, int col) {
        const Rational p = a_[row][col];
        if (p.is_zero()) throw std::logic_error("pivot on zero element");
        const Rational inv = Rational(1) / p;
        for (int j = 0; j < nstruct_; ++j) a_[row][j] *= inv;
        a_[row][col] = inv;
        rhs_[row] *= inv;
        for (int i = 0; i < nrows_; ++i) {
            if (i == row) continue;
            const Rational f = a_[i][col];
            if (f.is_zero()) continue;
            for (int j = 0; j < nstruct_; ++j) {
                if (j == col)
                    a_[i][j] = -f * a_[row][j];
                else if (!a_[row][j].is_zero())
                    a_[i][j] -= f * a_[row][j];
            }
            rhs_[i] -= f * rhs_[row];
        }
        std::swap(basic_[row], nonbasic_[col]);
    }

private:
    Dictionary() = default;
    int nstruct_ = 0, nrows_ = 0;
    std::vector<RVector> a_;
    RVector rhs_;
    std::vector<int> nonbasic_;
    std::vector<int> basic_;
};

/// Expresses a linear objective (coefficients over variable ids; absent ids
/// contribute zero) through the current dictionary as c0 + cost . nonbasic.
inline void express_objective(const Dictionary& d, const RVector& obj_by_var, RVector& cost,
                              Rational& c0) {
    const auto coef_of = [&](int var) {
        return var < static_cast<int>(obj_by_var.size()) ? obj_by_var[var] : Rational(0);
    };
    cost.assign(d.col_count(), Rational(0));
    c0 = Rational(0);
    for (int j = 0; j < d.col_count(); ++j) cost[j] = coef_of(d.nonbasic_var(j));
    for (int i = 0; i < d.row_count(); ++i) {
        const Rational cb = coef_of(d.basic_var(i));
        if (cb.is_zero()) continue;
        c0 += cb * d.rhs(i);
        for (int j = 0; j < d.col_count(); ++j) {
            if (!d.coeff(i, j).is_zero()) cost[j] -= cb * d.coeff(i, j);
        }
    }
}

/// Maximizes c0 + cost . nonbasic with Bland's least-index rule; exact,
/// terminating, deterministic. Updates cost/c0 alongside the dictionary.
inline void bland_optimize(Dictionary& d, RVector& cost, Rational& c0) {
    for (;;) {
        int enter = -1;
        for (int j = 0; j < d.col_count(); ++j) {
            if (cost[j] > 0 && (enter < 0 || d.nonbasic_var(j) < d.nonbasic_var(enter)))
                enter = j;
        }
        if (enter < 0) return;
        int leave = -1;
        Rational best_t(0);
        for (int i = 0; i < d.row_count(); ++i) {
            if (!(d.coeff(i, enter) > 0)) continue;
            const Rational t = d.rhs(i) / d.coeff(i, enter);
            if (leave < 0 || t < best_t ||
                (t == best_t && d.basic_var(i) < d.basic_var(leave))) {
                leave = i;
                best_t = t;
            }
        }
        if (leave < 0) throw UnboundedError();
        const Rational ce = cost[enter];
        d.pivot(leave, enter);
        // After the pivot the entering variable satisfies
        //   old_nb = rhs'(leave) - sum_j a'(leave,j) nb'_j.
        c0 += ce * d.rhs(leave);
        for (int j = 0; j < d.col_count(); ++j) {
            cost[j] = (j == enter ? Rational(0) : cost[j]) - ce * d.coeff(leave, j);
        }
    }
}

/// Rebuilds the dictionary without one nonbasic column, shifting variable
/// ids above `var` down by one.
inline Dictionary drop_nonbasic_column(const Dictionary& d, int col, int var) {
    std::vector<int> keep;
    for (int j = 0; j < d.col_count(); ++j)
        if (j != col) keep.push_back(j);
    std::vector<RVector> a(d.row_count(), RVector(keep.size(), Rational(0)));
    RVector rhs(d.row_count());
    std::vector<int> basic(d.row_count()), nonbasic(keep.size());
    for (std::size_t jj = 0; jj < keep.size(); ++jj) {
        const int v = d.nonbasic_var(keep[jj]);
        nonbasic[jj] = v > var ? v - 1 : v;
    }
    for (int i = 0; i < d.row_count(); ++i) {
        const int v = d.basic_var(i);
        basic[i] = v > var ? v - 1 : v;
        rhs[i] = d.rhs(i);
        for (std::size_t jj = 0; jj < keep.size(); ++jj) a[i][jj] = d.coeff(i, keep[jj]);
    }
    return Dictionary::from_raw(std::move(a), std::move(rhs), std::move(basic), std::move(nonbasic));
}

/// Returns a primal-feasible dictionary for the LP, running the
/// single-artificial phase when the slack basis does not qualify.
/// Throws InfeasibleError when the feasible region is empty.
inline Dictionary feasible_dictionary(const LoweredLp& lp) {
    Dictionary d(lp);
    if (d.rhs_feasible()) return d;

    LoweredLp aug;
    aug.nvars = lp.nvars + 1;
    aug.rows = lp.rows;
    aug.rhs = lp.rhs;
    const int x0 = lp.nvars;
    for (auto& row : aug.rows) row.emplace_back(x0, Rational(-1));
    Dictionary da(aug);
    int worst = 0;
    for (int i = 0; i < da.row_count(); ++i)
        if (da.rhs(i) < da.rhs(worst)) worst = i;
    da.pivot(worst, x0);
    if (!da.rhs_feasible()) throw std::logic_error("phase one produced an infeasible start");

    RVector obj(aug.nvars, Rational(0));
    obj[x0] = Rational(-1);
    RVector cost;
    Rational c0;
    express_objective(da, obj, cost, c0);
    bland_optimize(da, cost, c0);
    if (c0 < 0) throw InfeasibleError();

    // x0 is zero at the optimum; drive it out of the basis if it lingers.
    for (int i = 0; i < da.row_count(); ++i) {
        if (da.basic_var(i) != x0) continue;
        int col = -1;
        for (int j = 0; j < da.col_count(); ++j) {
            if (da.nonbasic_var(j) != x0 && !da.coeff(i, j).is_zero()) {
                col = j;
                break;
            }
        }
        if (col < 0) throw std::logic_error("artificial variable stuck in an all-zero row");
        da.pivot(i, col);  // degenerate: rhs(i) == 0, the point does not move
        break;
    }
    int x0col = -1;
    for (int j = 0; j < da.col_count(); ++j)
        if (da.nonbasic_var(j) == x0) x0col = j;
    return drop_nonbasic_column(da, x0col, x0);
}

struct LpSolution {
    Rational value;
    RVector z;  // over the lowered variables
};

/// Two-phase primal simplex with Bland's rule, fully exact.
inline LpSolution simplex_maximize(const LoweredLp& lp, const RVector& objective) {
    if (static_cast<int>(objective.size()) != lp.nvars)
        throw std::invalid_argument("objective length mismatch");
    Dictionary d = feasible_dictionary(lp);
    RVector cost;
    Rational c0;
    express_objective(d, objective, cost, c0);
    bland_optimize(d, cost, c0);
    RVector z = d.structural_values(lp.nvars);
    Rational value(0);
    for (int j = 0; j < lp.nvars; ++j) value += objective[j] * z[j];
    return {std::move(value), std::move(z)};
}

}  // namespace detail
}  // namespace maxattract
