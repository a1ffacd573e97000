#pragma once

#include <atomic>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "maxattract/cuts.hpp"
#include "maxattract/formulation.hpp"
#include "maxattract/simplex.hpp"
#include "maxattract/vertices.hpp"

namespace maxattract {

struct LpOptimum {
    Rational value;
    RVector assignment;  // over the system's catalog, fixed variables included
};

/// Exact LP maximization over a binary-free system (Bland's rule, hence a
/// deterministic optimal basic point). Objective terms on fixed variables
/// contribute their constant part.
inline LpOptimum lp_maximize(const ConstraintSystem& sys,
                             const std::vector<std::pair<VariableId, Rational>>& objective) {
    const detail::LoweredLp lp = detail::lower_system(sys);
    RVector obj(lp.nvars, Rational(0));
    Rational constant(0);
    for (const auto& [id, coef] : objective) {
        const int k = sys.index_of(id);
        if (lp.lowered_index[k] >= 0)
            obj[lp.lowered_index[k]] += coef;
        else
            constant += coef * lp.fixed_value[k];
    }
    detail::LpSolution sol = detail::simplex_maximize(lp, obj);
    return {sol.value + constant, lp.full_assignment(sol.z)};
}

/// Finite vertex list of a bounded, binary-free system. Exact, complete,
/// deduplicated, ordered lexicographically by coordinates.
struct VertexSet {
    std::vector<VariableId> coords;        // meaning of each coordinate
    std::vector<RVector> points;           // sorted lexicographically
    std::optional<std::vector<int>> pattern;  // the fixed ŷ these belong to, when known
};

inline VertexSet enumerate_vertices(const ConstraintSystem& sys) {
    VertexSet out;
    for (int k = 0; k < sys.var_count(); ++k) out.coords.push_back(sys.var(k).id);
    out.points = detail::enumerate_vertices_catalog(sys);
    return out;
}

namespace detail {

inline void pattern_size_guard(const ConstraintSystem& sys, const char* who) {
    int n = 0;
    for (int k = 0; k < sys.var_count(); ++k)
        if (sys.var(k).id.kind == VarKind::Y) ++n;
    if (n > 16)
        throw SizeGuardExceeded(std::string(who) + " refused: " + std::to_string(n) +
                                " binary locations exceed the 2^16 pattern limit");
}

/// Vertices of every binary pattern consistent with the system's fixing
/// rows, reassembled in the full catalog (y coordinates = pattern values).
struct PatternVertices {
    std::vector<int> pattern;
    std::vector<RVector> points;  // in the original system's catalog order
};

inline std::vector<PatternVertices> vertices_by_pattern(const ConstraintSystem& sys) {
    pattern_size_guard(sys, "vertex enumeration by pattern");
    std::vector<PatternVertices> out;
    for (const auto& pat : consistent_patterns(sys)) {
        const ConstraintSystem fixed = fix_binary(sys, pat);
        std::vector<RVector> pts = enumerate_vertices_catalog(fixed);
        PatternVertices pv;
        pv.pattern = pat;
        int yslot = 0;
        std::vector<int> src(sys.var_count(), -1);
        std::vector<int> ypos(sys.var_count(), -1);
        for (int k = 0; k < sys.var_count(); ++k) {
            if (sys.var(k).id.kind == VarKind::Y)
                ypos[k] = yslot++;
            else
                src[k] = fixed.index_of(sys.var(k).id);
        }
        for (const auto& p : pts) {
            RVector full(sys.var_count());
            for (int k = 0; k < sys.var_count(); ++k)
                full[k] = ypos[k] >= 0 ? Rational(pat[ypos[k]]) : p[src[k]];
            pv.points.push_back(std::move(full));
        }
        out.push_back(std::move(pv));
    }
    return out;
}

/// Evaluates a cut's left-hand side on a full lifted-catalog assignment.
inline Rational cut_lhs_on_catalog(const ConstraintSystem& sys, const LinearInequality& cut,
                                   const RVector& point) {
    Rational acc(0);
    for (const auto& [ij, coef] : cut.coeff_x)
        acc += coef * point[sys.index_of(VariableId::x(ij.first, ij.second))];
    for (const auto& [j, coef] : cut.coeff_y)
        acc += coef * point[sys.index_of(VariableId::y(j))];
    return acc;
}

inline PointXYQ point_from_catalog(const Instance& inst, const ConstraintSystem& sys,
                                   const RVector& a) {
    PointXYQ p = PointXYQ::zero(inst.m, inst.n);
    for (int k = 0; k < sys.var_count(); ++k) {
        const VariableId id = sys.var(k).id;
        switch (id.kind) {
            case VarKind::X: p.x_at(id.site, id.loc) = a[k]; break;
            case VarKind::Q: p.q_at(id.site, id.loc) = a[k]; break;
            default: p.y[id.loc] = a[k]; break;
        }
    }
    return p;
}

}  // namespace detail

struct ValidityReport {
    bool valid = false;
    std::vector<int> worst_pattern;  // first pattern attaining the maximum LHS
    PointXYQ maximizing_point;
    Rational slack;  // rhs - max LHS over all patterns; valid iff slack >= 0
};

/// Decides validity of a cut for the lifted polytope exactly: for every
/// binary pattern, maximizes the cut LHS over the fixed slice by LP.
/// Exhaustive in the 2^n patterns; n > 16 is refused.
inline ValidityReport check_valid(const Instance& inst, const LinearInequality& cut,
                                  int jobs = 1) {
    if (inst.n > 16)
        throw SizeGuardExceeded("check_valid refused: 2^" + std::to_string(inst.n) +
                                " binary patterns exceed the guard");
    const ConstraintSystem lifted = build_lifted(inst);
    const auto patterns = consistent_patterns(lifted);

    struct PatternMax {
        Rational value;
        RVector assignment;  // fixed-system catalog
    };
    std::vector<PatternMax> results(patterns.size());
    const auto solve_one = [&](std::size_t t) {
        const ConstraintSystem fixed = fix_binary(lifted, patterns[t]);
        std::vector<std::pair<VariableId, Rational>> obj;
        for (const auto& [ij, coef] : cut.coeff_x)
            obj.emplace_back(VariableId::x(ij.first, ij.second), coef);
        Rational constant(0);
        for (const auto& [j, coef] : cut.coeff_y) constant += coef * Rational(patterns[t][j]);
        LpOptimum opt = lp_maximize(fixed, obj);
        results[t] = {opt.value + constant, std::move(opt.assignment)};
    };
    if (jobs <= 1) {
        for (std::size_t t = 0; t < patterns.size(); ++t) solve_one(t);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> workers;
        for (int w = 0; w < jobs; ++w) {
            workers.emplace_back([&]() {
                for (std::size_t t = next.fetch_add(1); t < patterns.size();
                     t = next.fetch_add(1))
                    solve_one(t);
            });
        }
        for (auto& th : workers) th.join();
    }

    std::size_t worst = 0;
    for (std::size_t t = 1; t < patterns.size(); ++t)
        if (results[t].value > results[worst].value) worst = t;

    ValidityReport rep;
    rep.worst_pattern = patterns[worst];
    rep.slack = cut.rhs - results[worst].value;
    rep.valid = !(rep.slack < 0);
    const ConstraintSystem fixed = fix_binary(lifted, patterns[worst]);
    rep.maximizing_point = detail::point_from_catalog(inst, fixed, results[worst].assignment);
    for (int j = 0; j < inst.n; ++j) rep.maximizing_point.y[j] = patterns[worst][j];
    return rep;
}

/// Dimension of the convex hull of a mixed-binary system: affine rank of
/// all vertices across all consistent patterns, minus one.
inline int dimension_of(const ConstraintSystem& sys) {
    std::vector<RVector> all;
    for (auto& pv : detail::vertices_by_pattern(sys))
        for (auto& p : pv.points) all.push_back(std::move(p));
    return static_cast<int>(affine_rank(all)) - 1;
}

/// Measured dimension of conv of the lifted set; equals (2m+1)n whenever
/// every d_ij > 0 and c_j > 0.
inline int polytope_dimension(const Instance& inst) { return dimension_of(build_lifted(inst)); }

struct FacetReport {
    enum class Classification { Facet, LowerFace, EmptyFace, NotValid };
    int dimension = -1;       // dimension of the polytope
    int face_dimension = -1;  // affine rank of the tight vertex set minus one
    Classification classification = Classification::NotValid;
};

inline const char* classification_name(FacetReport::Classification c) {
    switch (c) {
        case FacetReport::Classification::Facet: return "facet";
        case FacetReport::Classification::LowerFace: return "lower face";
        case FacetReport::Classification::EmptyFace: return "empty face";
        default: return "not valid";
    }
}

/// Validity first, then the face dimension from the vertices lying on the
/// cut's hyperplane across all patterns.
inline FacetReport check_facet(const Instance& inst, const LinearInequality& cut) {
    const ConstraintSystem lifted = build_lifted(inst);
    const ValidityReport vr = check_valid(inst, cut);
    std::vector<RVector> all;
    for (auto& pv : detail::vertices_by_pattern(lifted))
        for (auto& p : pv.points) all.push_back(std::move(p));
    FacetReport rep;
    rep.dimension = static_cast<int>(affine_rank(all)) - 1;
    if (!vr.valid) {
        rep.classification = FacetReport::Classification::NotValid;
        return rep;
    }
    std::vector<RVector> tight;
    for (auto& p : all) {
        if (detail::cut_lhs_on_catalog(lifted, cut, p) == cut.rhs) tight.push_back(std::move(p));
    }
    if (tight.empty()) {
        rep.classification = FacetReport::Classification::EmptyFace;
        return rep;
    }
    rep.face_dimension = static_cast<int>(affine_rank(tight)) - 1;
    rep.classification = rep.face_dimension == rep.dimension - 1
                             ? FacetReport::Classification::Facet
                             : FacetReport::Classification::LowerFace;
    return rep;
}

namespace detail {

/// The region of Eq-style service constraints at a fixed pattern:
/// column sums bounded by opened capacity, row sums by attracted demand.
inline ConstraintSystem chi_region(const Instance& inst, const std::vector<int>& pattern) {
    ConstraintSystem sys;
    for (int i = 0; i < inst.m; ++i)
        for (int j = 0; j < inst.n; ++j) sys.add_variable(VariableId::x(i, j));
    const RVector dem = attracted_demand(inst, pattern);
    for (int j = 0; j < inst.n; ++j) {
        std::vector<std::pair<int, Rational>> coeffs;
        for (int i = 0; i < inst.m; ++i) coeffs.emplace_back(sys.index_of(VariableId::x(i, j)), 1);
        sys.add_row(std::move(coeffs), Relation::LessEq,
                    pattern[j] ? inst.c(j) : Rational(0), RowTag::Capacity);
    }
    for (int i = 0; i < inst.m; ++i) {
        std::vector<std::pair<int, Rational>> coeffs;
        for (int j = 0; j < inst.n; ++j) coeffs.emplace_back(sys.index_of(VariableId::x(i, j)), 1);
        sys.add_row(std::move(coeffs), Relation::LessEq, dem[i], RowTag::DemandLink);
    }
    return sys;
}

}  // namespace detail

/// Projection equivalence at desk scale: for each pattern, every vertex of
/// the lifted slice projects into the direct region, and every vertex of
/// the direct region extends to a feasible q by the argmax construction.
inline bool check_projection(const Instance& inst) {
    const ConstraintSystem lifted = build_lifted(inst);
    detail::pattern_size_guard(lifted, "check_projection");
    for (const auto& pat : consistent_patterns(lifted)) {
        const ConstraintSystem fixed = fix_binary(lifted, pat);
        const RVector dem = attracted_demand(inst, pat);
        for (const auto& p : detail::enumerate_vertices_catalog(fixed)) {
            // Projection of the slice must satisfy the direct constraints.
            for (int j = 0; j < inst.n; ++j) {
                Rational col(0);
                for (int i = 0; i < inst.m; ++i)
                    col += p[fixed.index_of(VariableId::x(i, j))];
                if (col > (pat[j] ? inst.c(j) : Rational(0))) return false;
            }
            for (int i = 0; i < inst.m; ++i) {
                Rational rowsum(0);
                for (int j = 0; j < inst.n; ++j)
                    rowsum += p[fixed.index_of(VariableId::x(i, j))];
                if (rowsum > dem[i]) return false;
            }
        }
        const ConstraintSystem region = detail::chi_region(inst, pat);
        for (const auto& p : detail::enumerate_vertices_catalog(region)) {
            std::vector<Rational> x(static_cast<std::size_t>(inst.m) * inst.n);
            for (int i = 0; i < inst.m; ++i)
                for (int j = 0; j < inst.n; ++j)
                    x[static_cast<std::size_t>(i) * inst.n + j] =
                        p[region.index_of(VariableId::x(i, j))];
            const PointXYQ ext = extend_by_argmax(inst, x, pat);
            if (!lifted.satisfies(ext.flat())) return false;
        }
    }
    return true;
}

}  // namespace maxattract
