#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "maxattract/errors.hpp"
#include "maxattract/formulation.hpp"
#include "maxattract/instance.hpp"
#include "maxattract/linalg.hpp"

namespace maxattract {

enum class CutFamily { SingleLocation, MultiLocation, CriticalFacet };

inline const char* family_name(CutFamily f) {
    switch (f) {
        case CutFamily::SingleLocation: return "single";
        case CutFamily::MultiLocation: return "multi";
        default: return "facet";
    }
}

/// A cut over the x and y variables only (the generated families never
/// touch q, so each cut applies to the projected polytope as well).
/// Provenance records the generating family and subsets.
struct LinearInequality {
    std::vector<std::pair<std::pair<int, int>, Rational>> coeff_x;  // ((i,j), coefficient)
    std::vector<std::pair<int, Rational>> coeff_y;                  // (j, coefficient)
    Rational rhs;
    CutFamily family = CutFamily::SingleLocation;
    IndexSubsets subsets;

    Rational lhs_at(const PointXYQ& p) const {
        Rational acc(0);
        for (const auto& [ij, coef] : coeff_x) acc += coef * p.x_at(ij.first, ij.second);
        for (const auto& [j, coef] : coeff_y) acc += coef * p.y[j];
        return acc;
    }

    std::vector<std::pair<VariableId, Rational>> coefficient_map() const {
        std::vector<std::pair<VariableId, Rational>> out;
        for (const auto& [ij, coef] : coeff_x)
            out.emplace_back(VariableId::x(ij.first, ij.second), coef);
        for (const auto& [j, coef] : coeff_y) out.emplace_back(VariableId::y(j), coef);
        return out;
    }

    bool same_coefficients(const LinearInequality& o) const {
        return coeff_x == o.coeff_x && coeff_y == o.coeff_y && rhs == o.rhs;
    }
};

/// max_{j in J} d_ij with the empty-set convention max over {} = 0.
inline Rational max_demand(const Instance& inst, int i, const std::vector<int>& J) {
    Rational best(0);
    for (int j : J)
        if (inst.d(i, j) > best) best = inst.d(i, j);
    return best;
}

inline Rational max_demand_all(const Instance& inst, int i) {
    Rational best(0);
    for (int j = 0; j < inst.n; ++j)
        if (inst.d(i, j) > best) best = inst.d(i, j);
    return best;
}

inline Rational sum_capacity(const Instance& inst, const std::vector<int>& J) {
    Rational acc(0);
    for (int j : J) acc += inst.c(j);
    return acc;
}

inline Rational sum_max_demand(const Instance& inst, const std::vector<int>& I,
                               const std::vector<int>& J) {
    Rational acc(0);
    for (int i : I) acc += max_demand(inst, i, J);
    return acc;
}

namespace detail {

inline void push_unit_x(std::vector<std::pair<std::pair<int, int>, Rational>>& coeffs, int i,
                        int j) {
    coeffs.emplace_back(std::make_pair(i, j), Rational(1));
}

inline void sort_cut(LinearInequality& cut) {
    std::sort(cut.coeff_x.begin(), cut.coeff_x.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::sort(cut.coeff_y.begin(), cut.coeff_y.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
}

}  // namespace detail

/// Single extra location j' added to J: the served demand on I over
/// J u {j'} cannot beat the J-capacity unless j' opens, and opening j'
/// adds at most the surplus of total attraction over J-capacity.
/// The y coefficient may carry either sign; it is emitted verbatim.
inline LinearInequality single_location_cut(const Instance& inst, const std::vector<int>& I,
                                            const std::vector<int>& J, int jprime) {
    const IndexSubsets sub = IndexSubsets::checked(I, J, jprime, inst);
    LinearInequality cut;
    cut.family = CutFamily::SingleLocation;
    cut.subsets = sub;
    for (int i : sub.I) {
        for (int j : sub.J) detail::push_unit_x(cut.coeff_x, i, j);
        detail::push_unit_x(cut.coeff_x, i, jprime);
    }
    Rational surplus(0);
    for (int i : sub.I) surplus += max_demand_all(inst, i);
    surplus -= sum_capacity(inst, sub.J);
    if (!surplus.is_zero()) cut.coeff_y.emplace_back(jprime, -surplus);
    cut.rhs = sum_capacity(inst, sub.J);
    detail::sort_cut(cut);
    return cut;
}

/// All-locations variant: requires the attraction of I over J to reach the
/// J-capacity. Each outside location pays for the extra attraction it can
/// bring over J.
inline LinearInequality multi_location_cut(const Instance& inst, const std::vector<int>& I,
                                           const std::vector<int>& J) {
    const IndexSubsets sub = IndexSubsets::checked(I, J, std::nullopt, inst);
    const Rational cap = sum_capacity(inst, sub.J);
    const Rational attraction = sum_max_demand(inst, sub.I, sub.J);
    if (!(cap <= attraction))
        throw ConditionNotMet("sum_J c_j <= sum_I max_J d_ij", cap, attraction);
    LinearInequality cut;
    cut.family = CutFamily::MultiLocation;
    cut.subsets = sub;
    for (int i : sub.I)
        for (int j = 0; j < inst.n; ++j) detail::push_unit_x(cut.coeff_x, i, j);
    for (int jp = 0; jp < inst.n; ++jp) {
        if (sub.contains_location(jp)) continue;
        std::vector<int> Jplus = sub.J;
        Jplus.push_back(jp);
        const Rational coef = sum_max_demand(inst, sub.I, Jplus) - cap;
        if (!coef.is_zero()) cut.coeff_y.emplace_back(jp, -coef);
    }
    cut.rhs = cap;
    detail::sort_cut(cut);
    return cut;
}

struct ConditionEntry {
    std::string name;
    bool holds;
    Rational lhs, rhs;  // the two exact side values compared
};

/// Evaluation of the critical-pair conditions: capacity surplus when all
/// of J opens, dominance of J in every row of I, and criticality of each
/// single location in J. Empty sums are 0 and empty maxima are 0, so the
/// criticality condition fails outright when |J| = 1.
struct ConditionReport {
    ConditionEntry surplus;
    std::vector<ConditionEntry> dominance;    // one entry per i in I
    std::vector<ConditionEntry> criticality;  // one entry per j0 in J
    bool all_hold = false;

    const ConditionEntry* first_failing() const {
        if (!surplus.holds) return &surplus;
        for (const auto& e : dominance)
            if (!e.holds) return &e;
        for (const auto& e : criticality)
            if (!e.holds) return &e;
        return nullptr;
    }
};

inline ConditionReport facet_conditions(const Instance& inst, const std::vector<int>& I,
                                        const std::vector<int>& J) {
    const IndexSubsets sub = IndexSubsets::checked(I, J, std::nullopt, inst);
    ConditionReport rep;
    const Rational cap = sum_capacity(inst, sub.J);
    const Rational attraction = sum_max_demand(inst, sub.I, sub.J);
    rep.surplus = {"surplus: sum_J c_j > sum_I max_J d_ij", cap > attraction, cap, attraction};
    for (int i : sub.I) {
        const Rational lhs = max_demand_all(inst, i);
        const Rational rhs = max_demand(inst, i, sub.J);
        rep.dominance.push_back({"dominance: max_[n] d_ij = max_J d_ij for site " +
                                     std::to_string(i + 1),
                                 lhs == rhs, lhs, rhs});
    }
    for (int j0 : sub.J) {
        std::vector<int> Jminus;
        for (int j : sub.J)
            if (j != j0) Jminus.push_back(j);
        const Rational lhs = sum_capacity(inst, Jminus);
        const Rational rhs = sum_max_demand(inst, sub.I, Jminus);
        rep.criticality.push_back({"criticality: sum_{J\\{j0}} c_j < sum_I max_{J\\{j0}} d_ij for j0 = " +
                                       std::to_string(j0 + 1),
                                   lhs < rhs, lhs, rhs});
    }
    rep.all_hold = rep.first_failing() == nullptr;
    return rep;
}

/// The facet-defining inequality of the critical pair (I, J), with
/// coefficients in closed form. Requires all conditions to hold.
inline LinearInequality critical_facet_cut(const Instance& inst, const std::vector<int>& I,
                                           const std::vector<int>& J) {
    const IndexSubsets sub = IndexSubsets::checked(I, J, std::nullopt, inst);
    const ConditionReport rep = facet_conditions(inst, sub.I, sub.J);
    if (const ConditionEntry* fail = rep.first_failing())
        throw ConditionNotMet(fail->name, fail->lhs, fail->rhs);
    const Rational cap = sum_capacity(inst, sub.J);
    const Rational attraction = sum_max_demand(inst, sub.I, sub.J);
    LinearInequality cut;
    cut.family = CutFamily::CriticalFacet;
    cut.subsets = sub;
    for (int i : sub.I)
        for (int j : sub.J) detail::push_unit_x(cut.coeff_x, i, j);
    for (int j : sub.J) {
        const Rational aj = (cap - inst.c(j)) - attraction;
        if (!aj.is_zero()) cut.coeff_y.emplace_back(j, aj);
    }
    cut.rhs = Rational(static_cast<long long>(sub.J.size()) - 1) * (cap - attraction);
    detail::sort_cut(cut);
    return cut;
}

struct CutCoefficients {
    std::vector<std::pair<int, Rational>> a;  // (location j, coefficient a_j)
    Rational b;
};

/// Derives the facet coefficients by solving the |J|+1 binding-regime
/// equations instead of using the closed form: one row for all of J open
/// (attraction binds) and one row per j with J\{j} open (capacity binds).
/// Kept independent of critical_facet_cut so the two routes can be
/// cross-checked against each other.
inline CutCoefficients solve_cut_coefficients(const Instance& inst, const std::vector<int>& I,
                                              const std::vector<int>& J) {
    const IndexSubsets sub = IndexSubsets::checked(I, J, std::nullopt, inst);
    if (sub.J.size() < 2)
        throw std::invalid_argument(
            "solve_cut_coefficients: system underdetermined for |J| = 1");
    const ConditionReport rep = facet_conditions(inst, sub.I, sub.J);
    if (const ConditionEntry* fail = rep.first_failing())
        throw ConditionNotMet(fail->name, fail->lhs, fail->rhs);
    const std::size_t k = sub.J.size();
    // Unknowns: a_j for j in J (in sorted order), then b.
    RMatrix A(k + 1, k + 1);
    RVector rhs(k + 1);
    for (std::size_t t = 0; t < k; ++t) A.at(0, t) = 1;
    A.at(0, k) = Rational(-1);
    rhs[0] = -sum_max_demand(inst, sub.I, sub.J);
    for (std::size_t r = 0; r < k; ++r) {
        std::vector<int> Jminus;
        for (std::size_t t = 0; t < k; ++t) {
            if (t != r) {
                A.at(r + 1, t) = 1;
                Jminus.push_back(sub.J[t]);
            }
        }
        A.at(r + 1, k) = Rational(-1);
        rhs[r + 1] = -sum_capacity(inst, Jminus);
    }
    const SolveResult sol = solve_linear(A, rhs);
    if (sol.status != SolveStatus::Unique)
        throw std::runtime_error("solve_cut_coefficients: coefficient system is singular");
    CutCoefficients out;
    for (std::size_t t = 0; t < k; ++t) out.a.emplace_back(sub.J[t], sol.solution[t]);
    out.b = sol.solution[k];
    return out;
}

}  // namespace maxattract
