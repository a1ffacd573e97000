// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Every check is exact rational arithmetic; the only inexact
// quantities are the wall-clock budgets.

#include <chrono>
#include <cstdint>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "maxattract/json_io.hpp"
#include "maxattract/separation.hpp"
#include "maxattract/solver.hpp"
#include "maxattract/witness.hpp"
#include "separation_rescan.hpp"

using namespace maxattract;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            if (!detail.empty()) detail += "; ";
            detail += what;
        }
    }
};

// Deterministic corpora. Shapes cycle through the size grid; seeds are
// sequential so failures are reproducible from the printed seed.
std::vector<Instance> corpus(int count, const std::vector<std::pair<int, int>>& shapes,
                             std::uint64_t seed0 = 1) {
    std::vector<Instance> out;
    for (int t = 0; t < count; ++t) {
        const auto [m, n] = shapes[t % shapes.size()];
        out.push_back(generate_random(m, n, seed0 + t));
    }
    return out;
}

Outcome criterion1_reference_facet() {
    Outcome o;
    const Instance r = testhelp::reference_instance();
    const ConditionReport rep = facet_conditions(r, {0, 1, 2}, {0, 1});
    o.require(rep.all_hold, "facet conditions should all hold on the reference");
    const LinearInequality cut = critical_facet_cut(r, {0, 1, 2}, {0, 1});
    o.require(cut.rhs == Rational(2), "rhs must be exactly 2");
    Rational a0(0), a1(0);
    for (const auto& [j, c] : cut.coeff_y) (j == 0 ? a0 : a1) = c;
    o.require(a0 == Rational(-2) && a1 == Rational(-2), "y coefficients must be exactly -2");
    for (const auto& [ij, c] : cut.coeff_x) o.require(c == Rational(1), "x coefficients must be 1");
    o.require(cut.coeff_x.size() == 6, "all six x variables enter the cut");
    const ValidityReport vr = check_valid(r, cut);
    o.require(vr.valid && vr.slack == Rational(0), "cut must be valid with zero slack");
    const FacetReport fr = check_facet(r, cut);
    o.require(fr.dimension == 14, "polytope dimension must be 14");
    o.require(fr.face_dimension == 13, "face dimension must be 13");
    o.require(fr.classification == FacetReport::Classification::Facet, "classification facet");
    return o;
}

Outcome criterion2_dimension_formula() {
    Outcome o;
    const auto instances = corpus(50, {{1, 1}, {1, 2}, {2, 1}, {2, 2}});
    for (std::size_t t = 0; t < instances.size(); ++t) {
        const Instance& inst = instances[t];
        const int expected = (2 * inst.m + 1) * inst.n;
        if (polytope_dimension(inst) != expected) {
            o.require(false, "dimension mismatch at corpus index " + std::to_string(t));
            break;
        }
    }
    return o;
}

Outcome criterion3_validity_sweep() {
    Outcome o;
    const auto instances =
        corpus(100, {{1, 1}, {1, 2}, {2, 1}, {2, 2}, {3, 2}, {2, 3}, {3, 3}, {1, 3}, {3, 1}});
    long long cuts_checked = 0;
    for (std::size_t t = 0; t < instances.size() && o.pass; ++t) {
        const Instance& inst = instances[t];
        const auto fail = [&](const char* family, const std::vector<int>& I,
                              const std::vector<int>& J) {
            o.require(false, std::string(family) + " cut invalid at corpus index " +
                                 std::to_string(t) + " with |I|=" + std::to_string(I.size()) +
                                 " |J|=" + std::to_string(J.size()));
        };
        for (std::uint32_t im = 1; im < (1u << inst.m) && o.pass; ++im) {
            std::vector<int> I;
            for (int i = 0; i < inst.m; ++i)
                if (im & (1u << i)) I.push_back(i);
            for (std::uint32_t jm = 1; jm < (1u << inst.n) && o.pass; ++jm) {
                std::vector<int> J;
                for (int j = 0; j < inst.n; ++j)
                    if (jm & (1u << j)) J.push_back(j);
                if (static_cast<int>(J.size()) < inst.n) {
                    for (int jp = 0; jp < inst.n; ++jp) {
                        if (jm & (1u << jp)) continue;
                        const auto cut = single_location_cut(inst, I, J, jp);
                        ++cuts_checked;
                        if (!check_valid(inst, cut).valid) fail("single", I, J);
                    }
                }
                if (sum_capacity(inst, J) <= sum_max_demand(inst, I, J)) {
                    const auto cut = multi_location_cut(inst, I, J);
                    ++cuts_checked;
                    if (!check_valid(inst, cut).valid) fail("multi", I, J);
                }
                if (facet_conditions(inst, I, J).all_hold) {
                    const auto cut = critical_facet_cut(inst, I, J);
                    ++cuts_checked;
                    if (!check_valid(inst, cut).valid) fail("facet", I, J);
                }
            }
        }
    }
    if (o.pass) o.detail = std::to_string(cuts_checked) + " cuts all valid";
    return o;
}

Outcome criterion4_projection() {
    Outcome o;
    const auto instances = corpus(50, {{1, 1}, {1, 2}, {2, 1}, {2, 2}});
    for (std::size_t t = 0; t < instances.size(); ++t) {
        if (!check_projection(instances[t])) {
            o.require(false, "projection equivalence fails at corpus index " + std::to_string(t));
            break;
        }
    }
    return o;
}

Outcome criterion5_lemma_constructions() {
    Outcome o;
    for (int n = 1; n <= 8; ++n) {
        const VectorFamily f = cycle_difference_vectors(n);
        o.require(f.achieved_affine_rank == static_cast<std::size_t>(n),
                  "cycle family must certify n = " + std::to_string(n));
    }
    for (const auto& sizes :
         std::vector<std::vector<int>>{{2, 2}, {2, 3}, {3, 3}, {4, 4, 4}, {2, 2, 2, 2}, {5, 2}}) {
        const VectorFamily f = block_cycle_vectors(sizes);
        o.require(f.achieved_affine_rank == f.claimed_count, "block family must certify sum n_i");
    }
    {
        std::mt19937_64 rng(5);
        const auto draw = [&]() { return Rational(static_cast<long long>(rng() % 4)); };
        for (const auto& [l, m, n] :
             std::vector<std::tuple<int, int, int>>{{1, 1, 1}, {2, 2, 2}, {1, 2, 2}, {2, 3, 3}}) {
            std::vector<RVector> u(n), v(n), w(n);
            for (int k = 0; k < n; ++k) {
                u[k].resize(static_cast<std::size_t>(l) * n);
                for (auto& e : u[k]) e = draw();
                v[k].resize(static_cast<std::size_t>(m) * n);
                for (auto& e : v[k]) e = draw();
                w[k].assign(n, Rational(0));
                w[k][k] = 1;
            }
            // u' above the random range: distinct base sums keep Y independent
            RVector up(static_cast<std::size_t>(l) * n, Rational(5));
            RVector vp(static_cast<std::size_t>(m) * n);
            for (auto& e : vp) e = draw();
            const VectorFamily f = perturbation_family(u, v, w, up, vp);
            o.require(f.achieved_affine_rank == static_cast<std::size_t>(l + m + 1) * n,
                      "perturbation family must certify (l+m+1)n");
        }
    }
    {
        // Boundary extension: I = [m], J = [n] on the reference.
        const Instance r = testhelp::reference_instance();
        const IndexSubsets sub = IndexSubsets::checked({0, 1, 2}, {0, 1}, {}, r);
        const TightPlane plane = TightPlane::of(critical_facet_cut(r, {0, 1, 2}, {0, 1}));
        const auto v = affinely_independent_subset(tight_vertices_of_restriction(r, sub, plane));
        o.require(v.size() == 14, "reference tight set must have 14 independent points");
        const VectorFamily f = extension_points(r, sub, v, plane);
        o.require(f.achieved_affine_rank == 14, "boundary extension must certify 2mn+n = 14");
    }
    {
        // Demand-link facet of a strict restriction.
        Instance inst;
        inst.m = 2;
        inst.n = 2;
        inst.capacity = {4, 4};
        inst.demand = {{3, 1}, {1, 2}};
        const IndexSubsets sub = IndexSubsets::checked({0}, {0}, {}, inst);
        TightPlane plane;
        plane.coeffs = {{VariableId::x(0, 0), Rational(1)}, {VariableId::q(0, 0), Rational(-3)}};
        plane.rhs = Rational(0);
        const auto v = affinely_independent_subset(tight_vertices_of_restriction(inst, sub, plane));
        o.require(v.size() == 3, "demand-link tight set must have 3 independent points");
        const VectorFamily f = extension_points(inst, sub, v, plane);
        o.require(f.achieved_affine_rank == 10, "extension must certify 2mn+n = 10");
    }
    {
        // Critical-facet cut of a strict site subset with J = [n].
        Instance inst;
        inst.m = 2;
        inst.n = 2;
        inst.capacity = {2, 2};
        inst.demand = {{3, 3}, {1, 1}};
        const IndexSubsets sub = IndexSubsets::checked({0}, {0, 1}, {}, inst);
        const TightPlane plane = TightPlane::of(critical_facet_cut(inst, {0}, {0, 1}));
        const auto v = affinely_independent_subset(tight_vertices_of_restriction(inst, sub, plane));
        o.require(v.size() == 6, "critical tight set must have 6 independent points");
        const VectorFamily f = extension_points(inst, sub, v, plane);
        o.require(f.achieved_affine_rank == 10, "extension must certify 2mn+n = 10");
    }
    return o;
}

Outcome criterion6_root_gap() {
    Outcome o;
    const Instance r = testhelp::reference_instance();
    Objective obj;
    obj.revenue.assign(3, Rational(1));
    obj.opening_cost = {3, 3};
    const BoundReport off = root_lp(r, obj, CutConfig::none());
    o.require(off.bound_without_cuts == Rational(4, 3), "root bound without cuts must be 4/3");
    const BoundReport on = root_lp(r, obj, CutConfig::facet_only());
    o.require(on.bound_with_cuts == Rational(1), "root bound with the facet family must be 1");
    const SolveReport solved = branch_and_bound(r, obj, CutConfig::facet_only());
    o.require(solved.optimal_value == Rational(1), "optimum must be exactly 1");
    o.require(solved.optimal_value ==
                  testhelp::pattern_bruteforce_max(r, obj.coefficient_map(3, 2)),
              "optimum must match the 2^n brute force");
    return o;
}

Outcome criterion7_separation() {
    Outcome o;
    const Instance r = testhelp::reference_instance();
    const PointXYQ point = testhelp::reference_fractional_point();
    const SeparationResult ex = separate_exhaustive(r, point);
    bool ex_has = false;
    for (const auto& vc : ex.cuts) ex_has = ex_has || vc.violation == Rational(3, 5);
    o.require(ex_has, "exhaustive separation must report a cut violated by exactly 3/5");
    const SeparationResult gr = separate_greedy(r, point, 50);
    bool gr_has = false;
    for (const auto& vc : gr.cuts) gr_has = gr_has || vc.violation == Rational(3, 5);
    o.require(gr_has, "greedy separation must report a cut violated by exactly 3/5");

    std::mt19937_64 rng(71);
    const auto instances = corpus(30, {{1, 1}, {1, 2}, {2, 2}, {3, 2}, {2, 1}, {3, 1}}, 500);
    for (std::size_t t = 0; t < instances.size() && o.pass; ++t) {
        const Instance& inst = instances[t];
        PointXYQ p = PointXYQ::zero(inst.m, inst.n);
        for (int i = 0; i < inst.m; ++i)
            for (int j = 0; j < inst.n; ++j) {
                p.x_at(i, j) = Rational(static_cast<long long>(rng() % 9), 2);
                p.q_at(i, j) = Rational(static_cast<long long>(rng() % 5), 4);
            }
        for (int j = 0; j < inst.n; ++j) p.y[j] = Rational(static_cast<long long>(rng() % 5), 4);
        const auto expected = testhelp::rescan_separation(inst, p);
        const SeparationResult res = separate_exhaustive(inst, p);
        o.require(res.cuts.size() == expected.size(),
                  "exhaustive scan size differs from the independent rescan at index " +
                      std::to_string(t));
        for (const auto& vc : res.cuts) {
            const testhelp::Provenance key{maxattract::detail::family_rank(vc.cut.family),
                                           vc.cut.subsets.I, vc.cut.subsets.J,
                                           vc.cut.subsets.jprime.value_or(-1)};
            const auto it = expected.find(key);
            if (it == expected.end() || it->second != vc.violation) {
                o.require(false, "violation mismatch against the rescan at index " +
                                     std::to_string(t));
                break;
            }
        }
    }
    return o;
}

Outcome criterion8_cut_harmlessness() {
    Outcome o;
    const auto instances =
        corpus(100, {{1, 1}, {1, 2}, {2, 1}, {2, 2}, {3, 2}, {2, 3}, {3, 3}, {1, 3}, {3, 1}});
    std::mt19937_64 rng(73);
    for (std::size_t t = 0; t < instances.size(); ++t) {
        const Instance& inst = instances[t];
        Objective obj;
        obj.revenue.assign(inst.m, Rational(1));
        obj.opening_cost.assign(inst.n, Rational(0));
        for (auto& f : obj.opening_cost) f = Rational(static_cast<long long>(rng() % 5));
        const SolveReport off = branch_and_bound(inst, obj, CutConfig::none());
        const SolveReport on = branch_and_bound(inst, obj, CutConfig::all());
        if (off.optimal_value != on.optimal_value) {
            o.require(false, "cuts changed the optimum at corpus index " + std::to_string(t));
            break;
        }
        if (on.root_bound_with_cuts > on.root_bound_without_cuts) {
            o.require(false, "cut bound exceeded the plain bound at corpus index " +
                                 std::to_string(t));
            break;
        }
    }
    return o;
}

struct Criterion {
    int id;
    const char* name;
    double budget_seconds;
    Outcome (*run)();
};

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, "reference-instance facet reproduction", 10.0, criterion1_reference_facet},
        {2, "dimension formula (2m+1)n on 50 instances", 60.0, criterion2_dimension_formula},
        {3, "validity sweep over 100 instances", 300.0, criterion3_validity_sweep},
        {4, "projection equivalence on the m<=2,n<=2 corpus", 60.0, criterion4_projection},
        {5, "lemma constructions certify their counts", 60.0, criterion5_lemma_constructions},
        {6, "root-gap closure 4/3 -> 1 on the reference", 5.0, criterion6_root_gap},
        {7, "separation soundness and completeness", 60.0, criterion7_separation},
        {8, "cut harmlessness across the corpus", 0.0, criterion8_cut_harmlessness},
    };
    bool all_pass = true;
    for (const auto& c : criteria) {
        const auto t0 = Clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
        if (c.budget_seconds > 0 && secs >= c.budget_seconds) {
            o.pass = false;
            if (!o.detail.empty()) o.detail += "; ";
            o.detail += "runtime budget of " + std::to_string(c.budget_seconds) + " s exceeded";
        }
        all_pass = all_pass && o.pass;
        std::ostringstream line;
        line << (o.pass ? "PASS" : "FAIL") << "  criterion " << c.id << "  (" << c.name << ")  ["
             << std::fixed << std::setprecision(2) << secs << " s]";
        if (!o.detail.empty()) line << "  " << o.detail;
        std::cout << line.str() << "\n";
    }
    return all_pass ? 0 : 1;
}
