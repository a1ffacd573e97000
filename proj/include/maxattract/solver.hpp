#pragma once

#include <algorithm>
#include <chrono>
#include <optional>
#include <utility>
#include <vector>

#include "maxattract/cuts.hpp"
#include "maxattract/oracle.hpp"
#include "maxattract/separation.hpp"

namespace maxattract {

/// Canonical economic objective: maximize sum_i r_i sum_j x_ij minus
/// sum_j f_j y_j. Revenues default to 1, opening costs to 0.
struct Objective {
    std::vector<Rational> revenue;       // one per site
    std::vector<Rational> opening_cost;  // one per location

    static Objective for_instance(const Instance& inst) {
        Objective obj;
        obj.revenue = inst.revenue ? *inst.revenue : std::vector<Rational>(inst.m, Rational(1));
        obj.opening_cost =
            inst.opening_cost ? *inst.opening_cost : std::vector<Rational>(inst.n, Rational(0));
        return obj;
    }

    std::vector<std::pair<VariableId, Rational>> coefficient_map(int m, int n) const {
        if (static_cast<int>(revenue.size()) != m || static_cast<int>(opening_cost.size()) != n)
            throw std::invalid_argument("Objective: dimension mismatch");
        std::vector<std::pair<VariableId, Rational>> out;
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < n; ++j) out.emplace_back(VariableId::x(i, j), revenue[i]);
        for (int j = 0; j < n; ++j) out.emplace_back(VariableId::y(j), -opening_cost[j]);
        return out;
    }
};

struct CutConfig {
    bool single = false;
    bool multi = false;
    bool facet = false;
    SeparationMode mode = SeparationMode::Exhaustive;
    long long greedy_budget = 1000;
    int round_cap = 20;  // separate-and-resolve rounds per node

    bool any() const { return single || multi || facet; }
    static CutConfig none() { return {}; }
    static CutConfig all() {
        CutConfig c;
        c.single = c.multi = c.facet = true;
        return c;
    }
    static CutConfig facet_only() {
        CutConfig c;
        c.facet = true;
        return c;
    }
    bool enabled(CutFamily f) const {
        switch (f) {
            case CutFamily::SingleLocation: return single;
            case CutFamily::MultiLocation: return multi;
            default: return facet;
        }
    }
};

struct BoundReport {
    Rational bound_without_cuts;
    Rational bound_with_cuts;
    std::vector<ViolatedCut> cuts_added;  // in discovery order, with provenance
    PointXYQ lp_point;                    // optimum of the final relaxation
    int rounds = 0;
};

namespace detail {

inline ConstraintSystem relax_binaries(const ConstraintSystem& sys) {
    ConstraintSystem out;
    for (int k = 0; k < sys.var_count(); ++k) {
        const auto& v = sys.var(k);
        out.add_variable(v.id, v.ub, false);
    }
    for (const auto& row : sys.rows()) out.add_row(row.coeffs, row.rel, row.rhs, row.tag);
    return out;
}

inline void append_cut_row(ConstraintSystem& sys, const LinearInequality& cut) {
    std::vector<std::pair<int, Rational>> coeffs;
    for (const auto& [ij, coef] : cut.coeff_x)
        coeffs.emplace_back(sys.index_of(VariableId::x(ij.first, ij.second)), coef);
    for (const auto& [j, coef] : cut.coeff_y)
        coeffs.emplace_back(sys.index_of(VariableId::y(j)), coef);
    sys.add_row(std::move(coeffs), Relation::LessEq, cut.rhs, RowTag::Cut);
}

inline void append_fixing_row(ConstraintSystem& sys, VariableId id, const Rational& value) {
    sys.add_row({{sys.index_of(id), Rational(1)}}, Relation::Eq, value, RowTag::Fixing);
}

/// Separate-and-resolve loop on one relaxation. Newly violated cuts are
/// appended to the shared pool; the final LP optimum and value come back.
struct CutLoopResult {
    Rational bound_first;   // before any cut of this loop
    Rational bound_final;
    PointXYQ point;
    int rounds = 0;
};

inline CutLoopResult cut_loop(const Instance& inst, const ConstraintSystem& relaxed_base,
                              const std::vector<std::pair<VariableId, Rational>>& objmap,
                              const CutConfig& cfg, std::vector<ViolatedCut>& pool) {
    CutLoopResult out;
    for (int round = 0;; ++round) {
        ConstraintSystem sys = relaxed_base;
        for (const auto& vc : pool) append_cut_row(sys, vc.cut);
        const LpOptimum opt = lp_maximize(sys, objmap);
        const PointXYQ point = point_from_catalog(inst, sys, opt.assignment);
        if (round == 0) out.bound_first = opt.value;
        out.bound_final = opt.value;
        out.point = point;
        out.rounds = round;
        if (!cfg.any() || round >= cfg.round_cap) return out;
        const SeparationResult sep = cfg.mode == SeparationMode::Exhaustive
                                         ? separate_exhaustive(inst, point)
                                         : separate_greedy(inst, point, cfg.greedy_budget);
        bool added = false;
        for (const auto& vc : sep.cuts) {
            if (!cfg.enabled(vc.cut.family)) continue;
            const bool known = std::any_of(pool.begin(), pool.end(), [&](const ViolatedCut& p) {
                return p.cut.same_coefficients(vc.cut);
            });
            if (known) continue;
            pool.push_back(vc);
            added = true;
        }
        if (!added) return out;
    }
}

}  // namespace detail

/// Root relaxation bounds, before and after the configured cut families.
inline BoundReport root_lp(const Instance& inst, const Objective& obj, const CutConfig& cfg) {
    const ConstraintSystem relaxed = detail::relax_binaries(build_lifted(inst));
    const auto objmap = obj.coefficient_map(inst.m, inst.n);
    std::vector<ViolatedCut> pool;
    const detail::CutLoopResult loop = detail::cut_loop(inst, relaxed, objmap, cfg, pool);
    BoundReport rep;
    rep.bound_without_cuts = loop.bound_first;
    rep.bound_with_cuts = loop.bound_final;
    rep.cuts_added = pool;
    rep.lp_point = loop.point;
    rep.rounds = loop.rounds;
    return rep;
}

struct SolveReport {
    Rational optimal_value;
    PointXYQ incumbent;
    Rational root_bound_without_cuts;
    Rational root_bound_with_cuts;
    std::vector<ViolatedCut> cuts_added;
    long long node_count = 0;
    double wall_seconds = 0;
};

namespace detail {

/// One depth-first pass over the branching tree. Branches on the most
/// fractional y_j (lowest index on ties), explores the closed branch
/// first. `target`: prune below it and stop as soon as some integral leaf
/// attains it (the achievability probe of the lexicographic pass);
/// without a target the pass computes the exact maximum.
struct TreeSearch {
    const Instance& inst;
    const ConstraintSystem& relaxed;
    const std::vector<std::pair<VariableId, Rational>>& objmap;
    const CutConfig& cfg;
    std::vector<ViolatedCut>& pool;
    long long nodes = 0;

    std::optional<Rational> run(const std::vector<std::optional<int>>& fixings,
                                const std::optional<Rational>& target,
                                Rational* root_before = nullptr, Rational* root_after = nullptr) {
        std::vector<std::vector<std::optional<int>>> stack{fixings};
        std::optional<Rational> best;
        bool first = true;
        while (!stack.empty()) {
            const auto node = std::move(stack.back());
            stack.pop_back();
            ConstraintSystem base = relaxed;
            for (int j = 0; j < inst.n; ++j)
                if (node[j]) append_fixing_row(base, VariableId::y(j), Rational(*node[j]));
            const CutLoopResult res = cut_loop(inst, base, objmap, cfg, pool);
            ++nodes;
            if (first) {
                if (root_before) *root_before = res.bound_first;
                if (root_after) *root_after = res.bound_final;
                first = false;
            }
            if (target && res.bound_final < *target) continue;
            if (!target && best && !(res.bound_final > *best)) continue;

            int branch = -1;
            Rational branch_frac(0);
            for (int j = 0; j < inst.n; ++j) {
                const Rational& yj = res.point.y[j];
                if (yj.is_zero() || yj == 1) continue;
                const Rational frac = min(yj, Rational(1) - yj);
                if (branch < 0 || frac > branch_frac) {
                    branch = j;
                    branch_frac = frac;
                }
            }
            if (branch < 0) {
                // Integral leaf: the LP value is exact at this y.
                if (target) {
                    if (res.bound_final >= *target) return res.bound_final;
                } else if (!best || res.bound_final > *best) {
                    best = res.bound_final;
                }
                continue;
            }
            auto closed = node, open = node;
            closed[branch] = 0;
            open[branch] = 1;
            stack.push_back(std::move(open));
            stack.push_back(std::move(closed));  // explore y_j = 0 first
        }
        return target ? std::nullopt : best;
    }
};

}  // namespace detail

/// Exact branch and bound on the binary y, in three passes: the optimal
/// value, then a lexicographic pass that fixes y_1, ..., y_n to the
/// smallest binary vector still attaining the optimum, then one LP for
/// the incumbent point. Cuts found anywhere are valid everywhere, so the
/// pool is shared across all passes.
inline SolveReport branch_and_bound(const Instance& inst, const Objective& obj,
                                    const CutConfig& cfg) {
    if (inst.n > 16)
        throw SizeGuardExceeded("branch_and_bound refused: more than 16 locations");
    const auto t0 = std::chrono::steady_clock::now();
    const ConstraintSystem relaxed = detail::relax_binaries(build_lifted(inst));
    const auto objmap = obj.coefficient_map(inst.m, inst.n);

    std::vector<ViolatedCut> pool;
    SolveReport rep;
    detail::TreeSearch search{inst, relaxed, objmap, cfg, pool};

    std::vector<std::optional<int>> fixings(inst.n, std::nullopt);
    const std::optional<Rational> value =
        search.run(fixings, std::nullopt, &rep.root_bound_without_cuts, &rep.root_bound_with_cuts);
    rep.optimal_value = *value;  // the zero point is always feasible

    for (int j = 0; j < inst.n; ++j) {
        fixings[j] = 0;
        if (!search.run(fixings, rep.optimal_value)) fixings[j] = 1;
    }
    ConstraintSystem fixed = relaxed;
    for (int j = 0; j < inst.n; ++j)
        detail::append_fixing_row(fixed, VariableId::y(j), Rational(*fixings[j]));
    const detail::CutLoopResult leaf =
        detail::cut_loop(inst, fixed, objmap, CutConfig::none(), pool);
    rep.incumbent = leaf.point;
    rep.node_count = search.nodes;
    rep.cuts_added = pool;
    rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

}  // namespace maxattract
