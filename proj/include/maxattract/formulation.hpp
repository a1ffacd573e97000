#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "maxattract/instance.hpp"

namespace maxattract {

enum class VarKind { X, Q, Y };

/// Identifies one decision variable: service x_ij, assignment q_ij or
/// opening y_j. Site index is -1 for Y variables. All indices 0-based;
/// 1-based conversion happens at the document/CLI boundary only.
struct VariableId {
    VarKind kind;
    int site;
    int loc;

    static VariableId x(int i, int j) { return {VarKind::X, i, j}; }
    static VariableId q(int i, int j) { return {VarKind::Q, i, j}; }
    static VariableId y(int j) { return {VarKind::Y, -1, j}; }

    friend bool operator==(const VariableId& a, const VariableId& b) {
        return a.kind == b.kind && a.site == b.site && a.loc == b.loc;
    }
    friend bool operator<(const VariableId& a, const VariableId& b) {
        if (a.kind != b.kind) return a.kind < b.kind;
        if (a.site != b.site) return a.site < b.site;
        return a.loc < b.loc;
    }

    std::string name() const {
        switch (kind) {
            case VarKind::X: return "x[" + std::to_string(site + 1) + "," + std::to_string(loc + 1) + "]";
            case VarKind::Q: return "q[" + std::to_string(site + 1) + "," + std::to_string(loc + 1) + "]";
            default: return "y[" + std::to_string(loc + 1) + "]";
        }
    }
};

enum class Relation { LessEq, Eq };
enum class RowTag { Capacity, DemandLink, QSum, QBound, Fixing, Cut };

inline const char* row_tag_name(RowTag t) {
    switch (t) {
        case RowTag::Capacity: return "capacity";
        case RowTag::DemandLink: return "demand-link";
        case RowTag::QSum: return "q-sum";
        case RowTag::QBound: return "q-bound";
        case RowTag::Fixing: return "fixing";
        default: return "cut";
    }
}

struct VarInfo {
    VariableId id;
    Rational lb;
    std::optional<Rational> ub;
    bool is_binary = false;
};

struct LinRow {
    std::vector<std::pair<int, Rational>> coeffs;  // (catalog index, coefficient), sorted
    Relation rel = Relation::LessEq;
    Rational rhs;
    RowTag tag = RowTag::Cut;
};

/// Sparse linear constraints over a variable catalog. Built once by the
/// formulation helpers, then treated as immutable.
class ConstraintSystem {
public:
    int add_variable(VariableId id, std::optional<Rational> ub = std::nullopt,
                     bool is_binary = false) {
        if (index_.count(id)) throw std::invalid_argument("duplicate variable " + id.name());
        const int k = static_cast<int>(vars_.size());
        vars_.push_back({id, Rational(0), std::move(ub), is_binary});
        index_[id] = k;
        return k;
    }

    void add_row(std::vector<std::pair<int, Rational>> coeffs, Relation rel, Rational rhs,
                 RowTag tag) {
        std::sort(coeffs.begin(), coeffs.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        for (std::size_t k = 0; k + 1 < coeffs.size(); ++k) {
            if (coeffs[k].first == coeffs[k + 1].first)
                throw std::invalid_argument("duplicate variable in coefficient map");
        }
        std::erase_if(coeffs, [](const auto& c) { return c.second.is_zero(); });
        for (const auto& [k, v] : coeffs) {
            if (k < 0 || k >= static_cast<int>(vars_.size()))
                throw std::invalid_argument("row references unknown variable");
        }
        rows_.push_back({std::move(coeffs), rel, std::move(rhs), tag});
    }

    int var_count() const { return static_cast<int>(vars_.size()); }
    const VarInfo& var(int k) const { return vars_[k]; }
    const std::vector<LinRow>& rows() const { return rows_; }

    std::optional<int> find(VariableId id) const {
        auto it = index_.find(id);
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }
    int index_of(VariableId id) const {
        auto k = find(id);
        if (!k) throw std::invalid_argument("unknown variable " + id.name());
        return *k;
    }

    std::vector<int> binary_vars() const {
        std::vector<int> out;
        for (int k = 0; k < var_count(); ++k)
            if (vars_[k].is_binary) out.push_back(k);
        return out;
    }
    bool has_binaries() const {
        return std::any_of(vars_.begin(), vars_.end(), [](const VarInfo& v) { return v.is_binary; });
    }

    /// Exact feasibility of a full assignment, including bounds and the
    /// integrality of binary-marked variables.
    bool satisfies(const RVector& assignment) const {
        if (assignment.size() != vars_.size()) return false;
        for (int k = 0; k < var_count(); ++k) {
            const auto& v = vars_[k];
            if (assignment[k] < v.lb) return false;
            if (v.ub && assignment[k] > *v.ub) return false;
            if (v.is_binary && !(assignment[k].is_zero() || assignment[k] == 1)) return false;
        }
        for (const auto& row : rows_) {
            Rational lhs;
            for (const auto& [k, coef] : row.coeffs) lhs += coef * assignment[k];
            if (row.rel == Relation::Eq ? lhs != row.rhs : lhs > row.rhs) return false;
        }
        return true;
    }

private:
    std::vector<VarInfo> vars_;
    std::map<VariableId, int> index_;
    std::vector<LinRow> rows_;
};

/// Exact assignment to every x_ij, y_j and q_ij of one instance.
struct PointXYQ {
    int m = 0, n = 0;
    std::vector<Rational> x;  // m*n, row-major by site
    std::vector<Rational> y;  // n
    std::vector<Rational> q;  // m*n, row-major by site

    static PointXYQ zero(int m, int n) {
        PointXYQ p;
        p.m = m;
        p.n = n;
        p.x.assign(static_cast<std::size_t>(m) * n, Rational(0));
        p.y.assign(n, Rational(0));
        p.q.assign(static_cast<std::size_t>(m) * n, Rational(0));
        return p;
    }

    Rational& x_at(int i, int j) { return x[static_cast<std::size_t>(i) * n + j]; }
    Rational& q_at(int i, int j) { return q[static_cast<std::size_t>(i) * n + j]; }
    const Rational& x_at(int i, int j) const { return x[static_cast<std::size_t>(i) * n + j]; }
    const Rational& q_at(int i, int j) const { return q[static_cast<std::size_t>(i) * n + j]; }

    const Rational& value_of(VariableId id) const {
        switch (id.kind) {
            case VarKind::X: return x_at(id.site, id.loc);
            case VarKind::Q: return q_at(id.site, id.loc);
            default: return y[id.loc];
        }
    }

    /// Canonical flat coordinates (x block, q block, y block); the order
    /// used for every affine-rank computation.
    RVector flat() const {
        RVector out;
        out.reserve(x.size() + q.size() + y.size());
        out.insert(out.end(), x.begin(), x.end());
        out.insert(out.end(), q.begin(), q.end());
        out.insert(out.end(), y.begin(), y.end());
        return out;
    }

    friend bool operator==(const PointXYQ& a, const PointXYQ& b) {
        return a.m == b.m && a.n == b.n && a.x == b.x && a.y == b.y && a.q == b.q;
    }
};

/// Demand attracted from each site under a binary location vector: zero
/// when nothing is open, otherwise the best single-center attraction
/// among the open locations.
inline RVector attracted_demand(const Instance& inst, const std::vector<int>& y) {
    if (static_cast<int>(y.size()) != inst.n)
        throw std::invalid_argument("attracted_demand: location vector length mismatch");
    RVector out(inst.m, Rational(0));
    for (int i = 0; i < inst.m; ++i) {
        for (int j = 0; j < inst.n; ++j) {
            if (y[j] != 0 && inst.d(i, j) > out[i]) out[i] = inst.d(i, j);
        }
    }
    return out;
}

/// The lifted constraint system: capacity, demand-link, q-sum and q-bound
/// rows, with y marked binary. Row count is n + m + m + m*n; nonnegativity
/// lives on the variable bounds.
inline ConstraintSystem build_lifted(const Instance& inst) {
    for (const auto& diag : validate(inst)) {
        if (diag.severity == Diagnostic::Severity::Error)
            throw std::invalid_argument("build_lifted: " + diag.path + ": " + diag.message);
    }
    ConstraintSystem sys;
    for (int i = 0; i < inst.m; ++i)
        for (int j = 0; j < inst.n; ++j) sys.add_variable(VariableId::x(i, j));
    for (int i = 0; i < inst.m; ++i)
        for (int j = 0; j < inst.n; ++j) sys.add_variable(VariableId::q(i, j));
    for (int j = 0; j < inst.n; ++j) sys.add_variable(VariableId::y(j), Rational(1), true);

    for (int j = 0; j < inst.n; ++j) {
        std::vector<std::pair<int, Rational>> coeffs;
        for (int i = 0; i < inst.m; ++i) coeffs.emplace_back(sys.index_of(VariableId::x(i, j)), 1);
        coeffs.emplace_back(sys.index_of(VariableId::y(j)), -inst.c(j));
        sys.add_row(std::move(coeffs), Relation::LessEq, Rational(0), RowTag::Capacity);
    }
    for (int i = 0; i < inst.m; ++i) {
        std::vector<std::pair<int, Rational>> coeffs;
        for (int j = 0; j < inst.n; ++j) coeffs.emplace_back(sys.index_of(VariableId::x(i, j)), 1);
        for (int j = 0; j < inst.n; ++j)
            coeffs.emplace_back(sys.index_of(VariableId::q(i, j)), -inst.d(i, j));
        sys.add_row(std::move(coeffs), Relation::LessEq, Rational(0), RowTag::DemandLink);
    }
    for (int i = 0; i < inst.m; ++i) {
        std::vector<std::pair<int, Rational>> coeffs;
        for (int j = 0; j < inst.n; ++j) coeffs.emplace_back(sys.index_of(VariableId::q(i, j)), 1);
        sys.add_row(std::move(coeffs), Relation::LessEq, Rational(1), RowTag::QSum);
    }
    for (int i = 0; i < inst.m; ++i) {
        for (int j = 0; j < inst.n; ++j) {
            std::vector<std::pair<int, Rational>> coeffs{
                {sys.index_of(VariableId::q(i, j)), Rational(1)},
                {sys.index_of(VariableId::y(j)), Rational(-1)}};
            sys.add_row(std::move(coeffs), Relation::LessEq, Rational(0), RowTag::QBound);
        }
    }
    return sys;
}

/// Substitutes the binary y variables by constants. The result is a
/// polytope in (x, q) only. Fixing rows that collapse to "0 = 0" are
/// dropped; a contradicted fixing row is an error.
inline ConstraintSystem fix_binary(const ConstraintSystem& sys, const std::vector<int>& yhat) {
    std::vector<int> yvars;
    for (int k = 0; k < sys.var_count(); ++k)
        if (sys.var(k).id.kind == VarKind::Y) yvars.push_back(k);
    if (yhat.size() != yvars.size())
        throw std::invalid_argument("fix_binary: pattern length mismatch");
    std::vector<Rational> value(sys.var_count(), Rational(0));
    std::vector<bool> is_y(sys.var_count(), false);
    for (std::size_t t = 0; t < yvars.size(); ++t) {
        if (yhat[t] != 0 && yhat[t] != 1)
            throw std::invalid_argument("fix_binary: pattern must be binary");
        value[yvars[t]] = yhat[t];
        is_y[yvars[t]] = true;
    }
    ConstraintSystem out;
    std::vector<int> remap(sys.var_count(), -1);
    for (int k = 0; k < sys.var_count(); ++k) {
        if (is_y[k]) continue;
        remap[k] = out.add_variable(sys.var(k).id, sys.var(k).ub, false);
    }
    for (const auto& row : sys.rows()) {
        Rational rhs = row.rhs;
        std::vector<std::pair<int, Rational>> coeffs;
        for (const auto& [k, coef] : row.coeffs) {
            if (is_y[k])
                rhs -= coef * value[k];
            else
                coeffs.emplace_back(remap[k], coef);
        }
        if (coeffs.empty()) {
            const bool ok = row.rel == Relation::Eq ? rhs.is_zero() : !(rhs < 0);
            if (!ok) throw std::invalid_argument("fix_binary: pattern contradicts a fixed row");
            continue;
        }
        out.add_row(std::move(coeffs), row.rel, std::move(rhs), row.tag);
    }
    return out;
}

/// Restriction to the index subsets: appends fixing rows y_j = 0 outside J
/// and x_ij = q_ij = 0 outside I x J.
inline ConstraintSystem restrict_subsets(const ConstraintSystem& sys, const IndexSubsets& sub) {
    ConstraintSystem out = sys;
    for (int k = 0; k < sys.var_count(); ++k) {
        const VariableId id = sys.var(k).id;
        bool fix = false;
        if (id.kind == VarKind::Y) {
            fix = !sub.contains_location(id.loc);
        } else {
            fix = !(sub.contains_site(id.site) && sub.contains_location(id.loc));
        }
        if (fix) out.add_row({{k, Rational(1)}}, Relation::Eq, Rational(0), RowTag::Fixing);
    }
    return out;
}

/// The q-vector built by the argmax rule: each site assigns its full
/// q-weight to the best open location, ties broken to the smallest index.
inline PointXYQ extend_by_argmax(const Instance& inst, const std::vector<Rational>& x,
                                 const std::vector<int>& yhat) {
    if (static_cast<int>(yhat.size()) != inst.n)
        throw std::invalid_argument("extend_by_argmax: pattern length mismatch");
    if (x.size() != static_cast<std::size_t>(inst.m) * inst.n)
        throw std::invalid_argument("extend_by_argmax: x length mismatch");
    PointXYQ p = PointXYQ::zero(inst.m, inst.n);
    p.x = x;
    for (int j = 0; j < inst.n; ++j) p.y[j] = yhat[j];
    for (int i = 0; i < inst.m; ++i) {
        int best = -1;
        for (int j = 0; j < inst.n; ++j) {
            if (yhat[j] == 0) continue;
            if (best < 0 || inst.d(i, j) > inst.d(i, best)) best = j;
        }
        if (best >= 0) p.q_at(i, best) = 1;
    }
    return p;
}

/// Enumerates the binary patterns consistent with any single-variable
/// fixing rows on y. Order: binary counting with y_1 toggling fastest,
/// e.g. (0,0), (1,0), (0,1), (1,1) for n = 2.
inline std::vector<std::vector<int>> consistent_patterns(const ConstraintSystem& sys) {
    std::vector<int> yvars;
    for (int k = 0; k < sys.var_count(); ++k)
        if (sys.var(k).id.kind == VarKind::Y) yvars.push_back(k);
    const int n = static_cast<int>(yvars.size());
    std::vector<std::optional<int>> fixed(n);
    for (const auto& row : sys.rows()) {
        if (row.rel != Relation::Eq || row.coeffs.size() != 1) continue;
        const auto& [k, coef] = row.coeffs.front();
        if (sys.var(k).id.kind != VarKind::Y) continue;
        const Rational v = row.rhs / coef;
        const int slot = static_cast<int>(std::lower_bound(yvars.begin(), yvars.end(), k) -
                                          yvars.begin());
        if (v.is_zero())
            fixed[slot] = 0;
        else if (v == 1)
            fixed[slot] = 1;
        else
            throw std::invalid_argument("consistent_patterns: y fixed to a non-binary value");
    }
    std::vector<std::vector<int>> out;
    for (std::uint64_t code = 0; code < (std::uint64_t{1} << n); ++code) {
        std::vector<int> pat(n);
        bool ok = true;
        for (int t = 0; t < n; ++t) {
            pat[t] = static_cast<int>((code >> t) & 1);  // y_1 toggles fastest
            if (fixed[t] && *fixed[t] != pat[t]) {
                ok = false;
                break;
            }
        }
        if (ok) out.push_back(std::move(pat));
    }
    return out;
}

/// Debug dump of catalog and rows; format is documented but not stable.
inline Json system_to_debug_json(const ConstraintSystem& sys) {
    Json vars = Json::array();
    for (int k = 0; k < sys.var_count(); ++k) {
        const auto& v = sys.var(k);
        Json jv;
        jv["name"] = v.id.name();
        jv["lb"] = numeral_to_json(v.lb);
        if (v.ub) jv["ub"] = numeral_to_json(*v.ub);
        if (v.is_binary) jv["binary"] = true;
        vars.push_back(std::move(jv));
    }
    Json rows = Json::array();
    for (const auto& row : sys.rows()) {
        Json jr;
        jr["tag"] = row_tag_name(row.tag);
        Json coeffs = Json::array();
        for (const auto& [k, coef] : row.coeffs)
            coeffs.push_back(Json::array({sys.var(k).id.name(), numeral_to_json(coef)}));
        jr["coeffs"] = std::move(coeffs);
        jr["relation"] = row.rel == Relation::Eq ? "=" : "<=";
        jr["rhs"] = numeral_to_json(row.rhs);
        rows.push_back(std::move(jr));
    }
    Json out;
    out["variables"] = std::move(vars);
    out["rows"] = std::move(rows);
    return out;
}

}  // namespace maxattract
