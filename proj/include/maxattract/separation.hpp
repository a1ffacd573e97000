#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <thread>
#include <utility>
#include <vector>

#include "maxattract/cuts.hpp"
#include "maxattract/formulation.hpp"
#include "maxattract/instance.hpp"

namespace maxattract {

struct ViolatedCut {
    LinearInequality cut;
    Rational violation;  // lhs(point) - rhs, strictly positive
};

enum class SeparationMode { Exhaustive, Greedy };

/// Cuts violated at the query point, strongest first. Ties break toward
/// the provably stronger family (facet before multi before single), then
/// lexicographically by (I, J, j').
struct SeparationResult {
    std::vector<ViolatedCut> cuts;
    SeparationMode mode = SeparationMode::Exhaustive;
    long long subsets_examined = 0;
};

namespace detail {

inline int family_rank(CutFamily f) {
    switch (f) {
        case CutFamily::CriticalFacet: return 0;
        case CutFamily::MultiLocation: return 1;
        default: return 2;
    }
}

inline bool separation_order(const ViolatedCut& a, const ViolatedCut& b) {
    if (a.violation != b.violation) return a.violation > b.violation;
    const int fa = family_rank(a.cut.family), fb = family_rank(b.cut.family);
    if (fa != fb) return fa < fb;
    if (a.cut.subsets.I != b.cut.subsets.I) return a.cut.subsets.I < b.cut.subsets.I;
    if (a.cut.subsets.J != b.cut.subsets.J) return a.cut.subsets.J < b.cut.subsets.J;
    return a.cut.subsets.jprime.value_or(-1) < b.cut.subsets.jprime.value_or(-1);
}

inline std::vector<int> bits_of(std::uint32_t mask) {
    std::vector<int> out;
    for (int t = 0; mask; ++t, mask >>= 1)
        if (mask & 1) out.push_back(t);
    return out;
}

/// Every violated family cut for one (I, J) pair at the point.
inline void collect_pair(const Instance& inst, const PointXYQ& point, const std::vector<int>& I,
                         const std::vector<int>& J, std::vector<ViolatedCut>& sink) {
    const auto consider = [&](LinearInequality cut) {
        const Rational v = cut.lhs_at(point) - cut.rhs;
        if (v > 0) sink.push_back({std::move(cut), v});
    };
    const ConditionReport rep = facet_conditions(inst, I, J);
    if (rep.all_hold) consider(critical_facet_cut(inst, I, J));
    if (sum_capacity(inst, J) <= sum_max_demand(inst, I, J))
        consider(multi_location_cut(inst, I, J));
    if (static_cast<int>(J.size()) < inst.n) {
        for (int jp = 0; jp < inst.n; ++jp) {
            if (std::binary_search(J.begin(), J.end(), jp)) continue;
            consider(single_location_cut(inst, I, J, jp));
        }
    }
}

}  // namespace detail

/// Complete scan over all admissible (family, I, J, j') tuples; exact
/// violations, no tolerance. Guarded to desk scale.
inline SeparationResult separate_exhaustive(const Instance& inst, const PointXYQ& point,
                                            int jobs = 1) {
    if (inst.m > 12 || inst.n > 8)
        throw SizeGuardExceeded("separate_exhaustive refused: m <= 12 and n <= 8 required");
    if (point.m != inst.m || point.n != inst.n)
        throw std::invalid_argument("separate_exhaustive: point dimensions mismatch");
    const std::uint32_t imax = (std::uint32_t{1} << inst.m) - 1;
    const std::uint32_t jmax = (std::uint32_t{1} << inst.n) - 1;

    SeparationResult res;
    res.mode = SeparationMode::Exhaustive;
    res.subsets_examined = static_cast<long long>(imax) * jmax;

    const auto scan_imask = [&](std::uint32_t im, std::vector<ViolatedCut>& sink) {
        const std::vector<int> I = detail::bits_of(im);
        for (std::uint32_t jm = 1; jm <= jmax; ++jm)
            detail::collect_pair(inst, point, I, detail::bits_of(jm), sink);
    };
    if (jobs <= 1) {
        for (std::uint32_t im = 1; im <= imax; ++im) scan_imask(im, res.cuts);
    } else {
        std::vector<std::vector<ViolatedCut>> parts(imax + 1);
        std::atomic<std::uint32_t> next{1};
        std::vector<std::thread> workers;
        for (int w = 0; w < jobs; ++w) {
            workers.emplace_back([&]() {
                for (std::uint32_t im = next.fetch_add(1); im <= imax; im = next.fetch_add(1))
                    scan_imask(im, parts[im]);
            });
        }
        for (auto& th : workers) th.join();
        for (std::uint32_t im = 1; im <= imax; ++im)
            res.cuts.insert(res.cuts.end(), parts[im].begin(), parts[im].end());
    }
    std::sort(res.cuts.begin(), res.cuts.end(), detail::separation_order);
    return res;
}

/// Budgeted heuristic: grows J from the best singleton by the location
/// whose inclusion most increases violation; I starts as the sites with
/// positive x-mass on J and is improved by single-site add/drop moves.
/// Every returned cut would also be found by the exhaustive scan.
inline SeparationResult separate_greedy(const Instance& inst, const PointXYQ& point,
                                        long long budget) {
    if (budget < 1) throw std::invalid_argument("separate_greedy: budget must be >= 1");
    if (point.m != inst.m || point.n != inst.n)
        throw std::invalid_argument("separate_greedy: point dimensions mismatch");

    long long used = 0;
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::optional<Rational>> memo;
    std::vector<ViolatedCut> pool;

    // Best violation over the families at (I, J); nullopt when the budget
    // ran out before this pair could be evaluated.
    const auto evaluate = [&](std::uint32_t im, std::uint32_t jm) -> std::optional<Rational> {
        if (im == 0 || jm == 0) return std::nullopt;
        const auto key = std::make_pair(im, jm);
        if (auto it = memo.find(key); it != memo.end()) return it->second;
        if (used >= budget) return std::nullopt;
        ++used;
        std::vector<ViolatedCut> found;
        detail::collect_pair(inst, point, detail::bits_of(im), detail::bits_of(jm), found);
        std::optional<Rational> best;
        for (auto& vc : found) {
            if (!best || vc.violation > *best) best = vc.violation;
            pool.push_back(std::move(vc));
        }
        if (!best) best = Rational(-1);  // admissible but nothing violated
        memo[key] = best;
        return best;
    };

    const auto mass_sites = [&](std::uint32_t jm) {
        std::uint32_t im = 0;
        for (int i = 0; i < inst.m; ++i) {
            Rational mass(0);
            for (int j = 0; j < inst.n; ++j)
                if (jm & (std::uint32_t{1} << j)) mass += point.x_at(i, j);
            if (mass > 0) im |= std::uint32_t{1} << i;
        }
        return im;
    };

    // Single-site add/drop hill climb on I at fixed J.
    const auto improve_sites = [&](std::uint32_t im, std::uint32_t jm) {
        std::optional<Rational> best = evaluate(im, jm);
        if (!best) return std::make_pair(im, best);
        for (;;) {
            std::uint32_t best_move = 0;
            std::optional<Rational> best_val = best;
            for (int i = 0; i < inst.m; ++i) {
                const std::uint32_t flipped = im ^ (std::uint32_t{1} << i);
                if (flipped == 0) continue;
                const auto v = evaluate(flipped, jm);
                if (v && (!best_val || *v > *best_val)) {
                    best_val = v;
                    best_move = flipped;
                }
            }
            if (best_move == 0 || !best_val || (best && !(*best_val > *best))) break;
            im = best_move;
            best = best_val;
        }
        return std::make_pair(im, best);
    };

    std::uint32_t cur_jm = 0;
    std::optional<Rational> cur_val;
    for (int j = 0; j < inst.n && used < budget; ++j) {
        const std::uint32_t jm = std::uint32_t{1} << j;
        const std::uint32_t im = mass_sites(jm);
        if (im == 0) continue;
        const auto [imp, val] = improve_sites(im, jm);
        if (val && (!cur_val || *val > *cur_val)) {
            cur_val = val;
            cur_jm = jm;
        }
    }
    while (cur_jm != 0 && used < budget) {
        std::uint32_t best_jm = 0;
        std::optional<Rational> best_val;
        for (int j = 0; j < inst.n; ++j) {
            const std::uint32_t bit = std::uint32_t{1} << j;
            if (cur_jm & bit) continue;
            const std::uint32_t jm = cur_jm | bit;
            const std::uint32_t im = mass_sites(jm);
            if (im == 0) continue;
            const auto [imp, val] = improve_sites(im, jm);
            if (val && (!best_val || *val > *best_val)) {
                best_val = val;
                best_jm = jm;
            }
        }
        if (best_jm == 0 || !best_val || !(*best_val > *cur_val)) break;
        cur_jm = best_jm;
        cur_val = best_val;
    }

    SeparationResult res;
    res.mode = SeparationMode::Greedy;
    res.subsets_examined = used;
    std::sort(pool.begin(), pool.end(), detail::separation_order);
    pool.erase(std::unique(pool.begin(), pool.end(),
                           [](const ViolatedCut& a, const ViolatedCut& b) {
                               return a.cut.family == b.cut.family &&
                                      a.cut.subsets == b.cut.subsets;
                           }),
               pool.end());
    res.cuts = std::move(pool);
    return res;
}

}  // namespace maxattract
