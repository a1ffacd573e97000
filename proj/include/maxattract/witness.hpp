#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "maxattract/cuts.hpp"
#include "maxattract/formulation.hpp"
#include "maxattract/linalg.hpp"
#include "maxattract/oracle.hpp"

namespace maxattract {

/// Labeled vector families produced by the independence constructions,
/// together with the count they are expected to certify and the affine
/// rank actually measured.
struct VectorFamily {
    std::vector<std::pair<std::string, std::vector<RVector>>> groups;
    std::size_t claimed_count = 0;
    std::size_t achieved_affine_rank = 0;
    std::optional<Rational> epsilon;  // perturbation size used, when applicable

    std::vector<RVector> all_vectors() const {
        std::vector<RVector> out;
        for (const auto& [label, vecs] : groups) out.insert(out.end(), vecs.begin(), vecs.end());
        return out;
    }
};

namespace detail {

inline RVector unit(std::size_t dim, std::size_t k) {
    RVector v(dim, Rational(0));
    v[k] = 1;
    return v;
}

inline void measure(VectorFamily& fam) {
    fam.achieved_affine_rank = affine_rank(fam.all_vectors());
}

}  // namespace detail

/// The cyclic difference vectors e_i - e_{i+1} (with n+1 -> 1): n affinely
/// independent vectors whose linear span has dimension n-1.
inline VectorFamily cycle_difference_vectors(int n) {
    if (n < 1) throw std::invalid_argument("cycle_difference_vectors: n must be positive");
    VectorFamily fam;
    std::vector<RVector> u;
    for (int i = 0; i < n; ++i) {
        RVector v(n, Rational(0));
        v[i] += 1;
        v[(i + 1) % n] -= 1;
        u.push_back(std::move(v));
    }
    fam.groups.emplace_back("U", std::move(u));
    fam.claimed_count = static_cast<std::size_t>(n);
    detail::measure(fam);
    return fam;
}

/// Within-block difference chains plus the cross-block cycle: N = sum n_i
/// affinely independent vectors in R^N, each block of size at least 2.
inline VectorFamily block_cycle_vectors(const std::vector<int>& sizes) {
    if (sizes.empty()) throw std::invalid_argument("block_cycle_vectors: need at least one block");
    for (int s : sizes)
        if (s < 2) throw std::invalid_argument("block_cycle_vectors: block sizes must be >= 2");
    const int k = static_cast<int>(sizes.size());
    std::size_t total = 0;
    std::vector<std::size_t> offset(k);
    for (int l = 0; l < k; ++l) {
        offset[l] = total;
        total += static_cast<std::size_t>(sizes[l]);
    }
    VectorFamily fam;
    for (int l = 0; l < k; ++l) {
        std::vector<RVector> ul;
        for (int i = 0; i + 1 < sizes[l]; ++i) {
            RVector v(total, Rational(0));
            v[offset[l] + i] += 1;
            v[offset[l] + i + 1] -= 1;
            ul.push_back(std::move(v));
        }
        fam.groups.emplace_back("U" + std::to_string(l + 1), std::move(ul));
    }
    std::vector<RVector> cross;
    for (int l = 0; l < k; ++l) {
        RVector v(total, Rational(0));
        v[offset[l]] += 1;
        v[offset[(l + 1) % k]] -= 1;
        cross.push_back(std::move(v));
    }
    fam.groups.emplace_back("V", std::move(cross));
    fam.claimed_count = total;
    detail::measure(fam);
    return fam;
}

/// Perturbation construction on the (x-block, q-block, y-block) space
/// R^{l n} + R^{m n} + R^n: base points carried by n independent binary
/// vectors w, perturbed by epsilon in the coordinates they open. Certifies
/// (l+m+1)n affinely independent vectors for small enough epsilon; epsilon
/// halves until the rank target is met.
inline VectorFamily perturbation_family(const std::vector<RVector>& u,
                                        const std::vector<RVector>& v,
                                        const std::vector<RVector>& w, const RVector& uprime,
                                        const RVector& vprime, Rational eps0 = Rational(1)) {
    const int n = static_cast<int>(w.size());
    if (n < 1) throw std::invalid_argument("perturbation_family: need at least one w vector");
    for (const auto& wi : w) {
        if (static_cast<int>(wi.size()) != n)
            throw std::invalid_argument("perturbation_family: w vectors must have dimension n");
        for (const auto& e : wi)
            if (!(e.is_zero() || e == 1))
                throw std::invalid_argument("perturbation_family: w vectors must be binary");
    }
    if (rank(RMatrix::from_rows(w)) != static_cast<std::size_t>(n))
        throw std::invalid_argument("perturbation_family: w vectors must be linearly independent");
    if (static_cast<int>(u.size()) != n || static_cast<int>(v.size()) != n)
        throw std::invalid_argument("perturbation_family: need n base vectors in u and v");
    if (u.front().empty() || u.front().size() % n != 0)
        throw std::invalid_argument("perturbation_family: u dimension must be a multiple of n");
    if (v.front().empty() || v.front().size() % n != 0)
        throw std::invalid_argument("perturbation_family: v dimension must be a multiple of n");
    const int l = static_cast<int>(u.front().size()) / n;
    const int m = static_cast<int>(v.front().size()) / n;
    for (const auto& uk : u)
        if (uk.size() != static_cast<std::size_t>(l) * n)
            throw std::invalid_argument("perturbation_family: ragged u vectors");
    for (const auto& vk : v)
        if (vk.size() != static_cast<std::size_t>(m) * n)
            throw std::invalid_argument("perturbation_family: ragged v vectors");
    if (uprime.size() != static_cast<std::size_t>(l) * n ||
        vprime.size() != static_cast<std::size_t>(m) * n)
        throw std::invalid_argument("perturbation_family: u'/v' dimension mismatch");

    const std::size_t dim = static_cast<std::size_t>(l) * n + static_cast<std::size_t>(m) * n + n;
    const auto base = [&](int k) {
        RVector p;
        p.reserve(dim);
        p.insert(p.end(), u[k].begin(), u[k].end());
        p.insert(p.end(), v[k].begin(), v[k].end());
        p.insert(p.end(), w[k].begin(), w[k].end());
        return p;
    };
    const auto xslot = [&](int i, int j) { return static_cast<std::size_t>(i) * n + j; };
    const auto qslot = [&](int i, int j) {
        return static_cast<std::size_t>(l) * n + static_cast<std::size_t>(i) * n + j;
    };

    const std::size_t target = static_cast<std::size_t>(l + m + 1) * n;
    Rational eps = eps0;
    for (int trial = 0; trial < 64; ++trial, eps /= 2) {
        VectorFamily fam;
        fam.claimed_count = target;
        fam.epsilon = eps;
        for (int k = 0; k < n; ++k) {
            std::vector<RVector> uk;
            for (int j = 0; j < n; ++j) {
                if (w[k][j].is_zero()) continue;
                for (int i = 0; i < l; ++i) {
                    for (int ip = 0; ip < l; ++ip) {
                        if (i == ip) continue;
                        RVector p = base(k);
                        p[xslot(i, j)] += eps;
                        p[xslot(ip, j)] -= eps;
                        uk.push_back(std::move(p));
                    }
                }
            }
            fam.groups.emplace_back("U" + std::to_string(k + 1), std::move(uk));
        }
        for (int k = 0; k < n; ++k) {
            std::vector<RVector> vk;
            for (int j = 0; j < n; ++j) {
                if (w[k][j].is_zero()) continue;
                for (int i = 0; i < m; ++i) {
                    RVector p = base(k);
                    p[qslot(i, j)] += eps;
                    vk.push_back(std::move(p));
                }
            }
            fam.groups.emplace_back("V" + std::to_string(k + 1), std::move(vk));
        }
        {
            std::vector<RVector> yk;
            for (int j = 0; j < n; ++j) {
                RVector p;
                p.reserve(dim);
                p.insert(p.end(), uprime.begin(), uprime.end());
                p.insert(p.end(), vprime.begin(), vprime.end());
                p.insert(p.end(), n, Rational(1));
                p[xslot(0, j)] += eps;
                p[xslot(0, (j + 1) % n)] -= eps;
                yk.push_back(std::move(p));
            }
            fam.groups.emplace_back("Y", std::move(yk));
        }
        {
            std::vector<RVector> wk;
            for (int k = 0; k < n; ++k) wk.push_back(base(k));
            fam.groups.emplace_back("W", std::move(wk));
        }
        detail::measure(fam);
        if (fam.achieved_affine_rank >= target) return fam;
    }
    throw std::runtime_error("perturbation_family: affine rank target not reached after 64 halvings");
}

/// A hyperplane over the lifted variables; used to certify that extension
/// points stay on a cut. Unlike the generated cut families it may carry q
/// coefficients (the general facet form does).
struct TightPlane {
    std::vector<std::pair<VariableId, Rational>> coeffs;
    Rational rhs;

    static TightPlane of(const LinearInequality& cut) {
        return {cut.coefficient_map(), cut.rhs};
    }

    Rational lhs_at(const PointXYQ& p) const {
        Rational acc(0);
        for (const auto& [id, coef] : coeffs) acc += coef * p.value_of(id);
        return acc;
    }
};

/// Extends a facet certificate of the restricted polytope to the full
/// space: from the (2|I|+1)|J| tight points V it emits the three
/// perturbation families V1 (open an outside location), V2 (assign an
/// outside site inside J) and V3 (give an inside site an outside q), and
/// certifies 2mn + n affinely independent points of the lifted set, all on
/// the cut's hyperplane. Epsilon halves until every emitted point is
/// feasible and the rank target is met; the x-perturbation in V3 uses
/// epsilon squared.
inline VectorFamily extension_points(const Instance& inst, const IndexSubsets& sub,
                                     const std::vector<PointXYQ>& tight_points,
                                     const std::optional<TightPlane>& plane = std::nullopt,
                                     Rational eps0 = Rational(1)) {
    const ConstraintSystem lifted = build_lifted(inst);
    const std::size_t expected_v =
        (2 * sub.I.size() + 1) * sub.J.size();
    if (tight_points.size() != expected_v)
        throw std::invalid_argument("extension_points: expected " + std::to_string(expected_v) +
                                    " tight points, got " + std::to_string(tight_points.size()));
    // Membership in the restricted polytope, and condition (1): binary y on J.
    for (const auto& p : tight_points) {
        if (!lifted.satisfies(p.flat()))
            throw std::invalid_argument("extension_points: a tight point is outside the lifted set");
        for (int j = 0; j < inst.n; ++j) {
            if (!sub.contains_location(j) && !p.y[j].is_zero())
                throw std::invalid_argument(
                    "extension_points: a tight point opens a location outside J");
            if (sub.contains_location(j) && !(p.y[j].is_zero() || p.y[j] == 1))
                throw std::invalid_argument("extension_points: condition (1) fails at location " +
                                            std::to_string(j + 1));
        }
        for (int i = 0; i < inst.m; ++i) {
            for (int j = 0; j < inst.n; ++j) {
                const bool inside = sub.contains_site(i) && sub.contains_location(j);
                if (!inside && !(p.x_at(i, j).is_zero() && p.q_at(i, j).is_zero()))
                    throw std::invalid_argument(
                        "extension_points: a tight point uses variables outside I x J");
            }
        }
        if (plane && plane->lhs_at(p) != plane->rhs)
            throw std::invalid_argument("extension_points: a tight point misses the hyperplane");
    }
    // Condition (2): for each j in J a tight point opening j with capacity slack.
    std::vector<const PointXYQ*> cond2(inst.n, nullptr);
    for (int j : sub.J) {
        for (const auto& p : tight_points) {
            if (p.y[j] != 1) continue;
            Rational col(0);
            for (int i : sub.I) col += p.x_at(i, j);
            if (col < inst.c(j)) {
                cond2[j] = &p;
                break;
            }
        }
        if (!cond2[j])
            throw std::invalid_argument("extension_points: condition (2) unmet for location " +
                                        std::to_string(j + 1));
    }
    // Condition (3): for each i in I a tight point with q-slack on J.
    std::vector<const PointXYQ*> cond3(inst.m, nullptr);
    for (int i : sub.I) {
        for (const auto& p : tight_points) {
            Rational qsum(0);
            for (int j : sub.J) qsum += p.q_at(i, j);
            if (qsum < 1) {
                cond3[i] = &p;
                break;
            }
        }
        if (!cond3[i])
            throw std::invalid_argument("extension_points: condition (3) unmet for site " +
                                        std::to_string(i + 1));
    }
    // Deterministic base point: lexicographically smallest.
    const PointXYQ* basep = &tight_points.front();
    for (const auto& p : tight_points)
        if (p.flat() < basep->flat()) basep = &p;

    std::vector<int> outside_sites, outside_locs;
    for (int i = 0; i < inst.m; ++i)
        if (!sub.contains_site(i)) outside_sites.push_back(i);
    for (int j = 0; j < inst.n; ++j)
        if (!sub.contains_location(j)) outside_locs.push_back(j);

    const std::size_t target = 2 * static_cast<std::size_t>(inst.m) * inst.n + inst.n;
    Rational eps = eps0;
    for (int trial = 0; trial < 64; ++trial, eps /= 2) {
        const Rational eps2 = eps * eps;
        std::vector<PointXYQ> v1, v2, v3;
        for (int j : outside_locs) {
            PointXYQ p = *basep;
            p.y[j] = 1;
            v1.push_back(p);
        }
        for (int i : outside_sites) {
            for (int j : outside_locs) {
                PointXYQ p = *basep;
                p.y[j] = 1;
                p.q_at(i, j) += 1;
                v1.push_back(p);
            }
        }
        for (int i : outside_sites) {
            for (int j : outside_locs) {
                PointXYQ p = *basep;
                p.y[j] = 1;
                p.q_at(i, j) += 1;
                p.x_at(i, j) += eps;
                v1.push_back(p);
            }
        }
        for (int i : outside_sites) {
            for (int j : sub.J) {
                PointXYQ p = *cond2[j];
                p.q_at(i, j) += 1;
                v2.push_back(p);
            }
        }
        for (int i : outside_sites) {
            for (int j : sub.J) {
                PointXYQ p = *cond2[j];
                p.q_at(i, j) += 1;
                p.x_at(i, j) += eps;
                v2.push_back(p);
            }
        }
        for (int i : sub.I) {
            for (int j : outside_locs) {
                PointXYQ p = *cond3[i];
                p.y[j] = 1;
                p.q_at(i, j) += eps;
                v3.push_back(p);
            }
        }
        for (int i : sub.I) {
            for (int j : outside_locs) {
                PointXYQ p = *cond3[i];
                p.y[j] = 1;
                p.q_at(i, j) += eps;
                p.x_at(i, j) += eps2;
                v3.push_back(p);
            }
        }
        bool ok = true;
        for (const auto* grp : {&v1, &v2, &v3}) {
            for (const auto& p : *grp) {
                if (!lifted.satisfies(p.flat()) || (plane && plane->lhs_at(p) != plane->rhs)) {
                    ok = false;
                    break;
                }
            }
            if (!ok) break;
        }
        if (!ok) continue;
        VectorFamily fam;
        fam.claimed_count = target;
        fam.epsilon = eps;
        auto flats = [](const std::vector<PointXYQ>& pts) {
            std::vector<RVector> out;
            for (const auto& p : pts) out.push_back(p.flat());
            return out;
        };
        fam.groups.emplace_back("V", flats(tight_points));
        fam.groups.emplace_back("V1", flats(v1));
        fam.groups.emplace_back("V2", flats(v2));
        fam.groups.emplace_back("V3", flats(v3));
        detail::measure(fam);
        if (fam.achieved_affine_rank >= target) return fam;
    }
    throw std::runtime_error("extension_points: affine rank target not reached after 64 halvings");
}

/// Greedy maximal affinely independent subset, scanning in the given
/// order (deterministic for sorted input).
inline std::vector<PointXYQ> affinely_independent_subset(const std::vector<PointXYQ>& pts) {
    std::vector<PointXYQ> out;
    if (pts.empty()) return out;
    out.push_back(pts.front());
    const RVector base = pts.front().flat();
    detail::IntRowBasis basis(base.size());
    for (std::size_t k = 1; k < pts.size(); ++k) {
        RVector diff = pts[k].flat();
        for (std::size_t j = 0; j < diff.size(); ++j) diff[j] -= base[j];
        if (basis.insert(diff)) out.push_back(pts[k]);
    }
    return out;
}

/// The tight vertices of a cut over the restriction to (I, J): the usual
/// starting set V for extension_points.
inline std::vector<PointXYQ> tight_vertices_of_restriction(const Instance& inst,
                                                           const IndexSubsets& sub,
                                                           const TightPlane& plane) {
    const ConstraintSystem restricted = restrict_subsets(build_lifted(inst), sub);
    std::vector<PointXYQ> out;
    for (const auto& pv : detail::vertices_by_pattern(restricted)) {
        for (const auto& a : pv.points) {
            const PointXYQ p = detail::point_from_catalog(inst, restricted, a);
            if (plane.lhs_at(p) == plane.rhs) out.push_back(p);
        }
    }
    std::sort(out.begin(), out.end(),
              [](const PointXYQ& a, const PointXYQ& b) { return a.flat() < b.flat(); });
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace maxattract
