#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "helpers.hpp"
#include "maxattract/witness.hpp"

using namespace maxattract;
using testhelp::reference_instance;

TEST_CASE("cycle difference vectors are affinely independent") {
    const VectorFamily f3 = cycle_difference_vectors(3);
    REQUIRE(f3.groups.size() == 1);
    const auto& u = f3.groups[0].second;
    CHECK(u[0] == RVector{1, -1, 0});
    CHECK(u[1] == RVector{0, 1, -1});
    CHECK(u[2] == RVector{-1, 0, 1});
    CHECK(f3.claimed_count == 3);
    CHECK(f3.achieved_affine_rank == 3);

    const VectorFamily f1 = cycle_difference_vectors(1);
    CHECK(f1.groups[0].second == std::vector<RVector>{{0}});
    CHECK(f1.achieved_affine_rank == 1);

    const VectorFamily f5 = cycle_difference_vectors(5);
    CHECK(f5.achieved_affine_rank == 5);
    CHECK(rank(RMatrix::from_rows(f5.all_vectors())) == 4);  // linear rank n-1
}

TEST_CASE("block cycle vectors certify N affinely independent vectors") {
    const VectorFamily f22 = block_cycle_vectors({2, 2});
    CHECK(f22.claimed_count == 4);
    CHECK(f22.all_vectors().size() == 4);
    CHECK(f22.achieved_affine_rank == 4);

    const VectorFamily f444 = block_cycle_vectors({4, 4, 4});
    CHECK(f444.claimed_count == 12);
    CHECK(f444.all_vectors().size() == 12);
    CHECK(f444.achieved_affine_rank == 12);

    CHECK_THROWS_AS(block_cycle_vectors({1, 2}), std::invalid_argument);
    CHECK_THROWS_AS(block_cycle_vectors({}), std::invalid_argument);
}

TEST_CASE("block cycle vectors across a grid of block shapes") {
    for (const auto& sizes :
         std::vector<std::vector<int>>{{2, 3}, {3, 3}, {2, 2, 2}, {5, 2}, {2, 2, 2, 2}}) {
        const VectorFamily f = block_cycle_vectors(sizes);
        CHECK(f.achieved_affine_rank == f.claimed_count);
    }
}

TEST_CASE("perturbation family reaches (l+m+1)n on the documented cases") {
    // l = m = n = 1: the three points are distinct for these bases.
    const VectorFamily tiny = perturbation_family({{0}}, {{0}}, {{1}}, {1}, {0});
    CHECK(tiny.claimed_count == 3);
    CHECK(tiny.achieved_affine_rank == 3);

    // l = m = n = 2 with identity w vectors.
    std::vector<RVector> u = {{0, 0, 0, 0}, {1, 0, 0, 1}};
    std::vector<RVector> v = {{0, 1, 0, 0}, {0, 0, 2, 0}};
    std::vector<RVector> w = {{1, 0}, {0, 1}};
    const VectorFamily f = perturbation_family(u, v, w, {1, 1, 0, 0}, {0, 0, 1, 1});
    CHECK(f.claimed_count == 10);
    CHECK(f.achieved_affine_rank == 10);
    REQUIRE(f.epsilon.has_value());
    CHECK(*f.epsilon > 0);
}

TEST_CASE("perturbation family rejects bad w vectors") {
    CHECK_THROWS_AS(perturbation_family({{0}, {0}}, {{0}, {0}}, {{1, 0}, {1, 0}},
                                        {0, 0}, {0, 0}),
                    std::invalid_argument);  // dependent
    CHECK_THROWS_AS(perturbation_family({{0}, {0}}, {{0}, {0}}, {{1, 0}, {0, 2}},
                                        {0, 0}, {0, 0}),
                    std::invalid_argument);  // non-binary
}

TEST_CASE("perturbation family over a seeded grid of shapes") {
    // Random bases in {0..3}; u' sits above that range so its entry sum
    // differs from every base's, which keeps the Y points off the affine
    // hull of the others (the construction has no rank slack to spare).
    std::mt19937_64 rng(43);
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
        RVector up(static_cast<std::size_t>(l) * n, Rational(5));
        RVector vp(static_cast<std::size_t>(m) * n);
        for (auto& e : vp) e = draw();
        const VectorFamily f = perturbation_family(u, v, w, up, vp);
        CHECK(f.claimed_count == static_cast<std::size_t>(l + m + 1) * n);
        CHECK(f.achieved_affine_rank == f.claimed_count);
    }
}

namespace {

Instance demand_cut_instance() {
    Instance inst;
    inst.m = 2;
    inst.n = 2;
    inst.capacity = {4, 4};
    inst.demand = {{3, 1}, {1, 2}};
    return inst;
}

TightPlane demand_link_plane(const Instance& inst) {
    // x_11 <= d_11 q_11 as a tight plane (the general facet form carries q).
    TightPlane plane;
    plane.coeffs = {{VariableId::x(0, 0), Rational(1)}, {VariableId::q(0, 0), -inst.d(0, 0)}};
    plane.rhs = Rational(0);
    return plane;
}

}  // namespace

TEST_CASE("extension on the full subsets is the boundary case: V alone suffices") {
    const Instance r = reference_instance();
    const IndexSubsets sub = IndexSubsets::checked({0, 1, 2}, {0, 1}, {}, r);
    const LinearInequality cut = critical_facet_cut(r, {0, 1, 2}, {0, 1});
    const TightPlane plane = TightPlane::of(cut);
    const auto tight = tight_vertices_of_restriction(r, sub, plane);
    const auto v = affinely_independent_subset(tight);
    REQUIRE(v.size() == 14);  // (2*3+1)*2
    const VectorFamily fam = extension_points(r, sub, v, plane);
    CHECK(fam.claimed_count == 14);  // 2mn + n with empty V1, V2, V3
    CHECK(fam.achieved_affine_rank == 14);
    for (const auto& [label, vecs] : fam.groups) {
        if (label != "V") CHECK(vecs.empty());
    }
}

TEST_CASE("extension certifies 2mn+n points from a demand-link facet of Z_IJ") {
    const Instance inst = demand_cut_instance();
    const IndexSubsets sub = IndexSubsets::checked({0}, {0}, {}, inst);
    const TightPlane plane = demand_link_plane(inst);
    const auto tight = tight_vertices_of_restriction(inst, sub, plane);
    const auto v = affinely_independent_subset(tight);
    REQUIRE(v.size() == 3);  // (2*1+1)*1
    const VectorFamily fam = extension_points(inst, sub, v, plane);
    CHECK(fam.claimed_count == 10);  // 2*2*2 + 2
    CHECK(fam.achieved_affine_rank == 10);
    // documented group sizes: 3 + 3 + 2 + 2
    REQUIRE(fam.groups.size() == 4);
    CHECK(fam.groups[0].second.size() == 3);
    CHECK(fam.groups[1].second.size() == 3);
    CHECK(fam.groups[2].second.size() == 2);
    CHECK(fam.groups[3].second.size() == 2);
    // every emitted point is in the lifted set and on the plane
    const ConstraintSystem lifted = build_lifted(inst);
    for (const auto& vec : fam.all_vectors()) CHECK(lifted.satisfies(vec));
}

TEST_CASE("extension certifies a critical-facet cut of a strict subset pair") {
    Instance inst;
    inst.m = 2;
    inst.n = 2;
    inst.capacity = {2, 2};
    inst.demand = {{3, 3}, {1, 1}};
    const IndexSubsets sub = IndexSubsets::checked({0}, {0, 1}, {}, inst);
    REQUIRE(facet_conditions(inst, {0}, {0, 1}).all_hold);
    const LinearInequality cut = critical_facet_cut(inst, {0}, {0, 1});
    const TightPlane plane = TightPlane::of(cut);
    const auto tight = tight_vertices_of_restriction(inst, sub, plane);
    const auto v = affinely_independent_subset(tight);
    REQUIRE(v.size() == 6);  // (2*1+1)*2
    const VectorFamily fam = extension_points(inst, sub, v, plane);
    CHECK(fam.claimed_count == 10);
    CHECK(fam.achieved_affine_rank == 10);
    // V1 and V3 are empty here (J = [n]); V2 carries 2(m-|I|)|J| = 4 points.
    CHECK(fam.groups[1].second.empty());
    CHECK(fam.groups[2].second.size() == 4);
    CHECK(fam.groups[3].second.empty());
    // The cut extends to a facet of the full polytope.
    CHECK(check_facet(inst, cut).classification == FacetReport::Classification::Facet);
}

TEST_CASE("extension rejects point sets that miss a condition") {
    const Instance inst = demand_cut_instance();
    const IndexSubsets sub = IndexSubsets::checked({0}, {0}, {}, inst);
    // Tight points of the capacity row x_11 <= c_1 y_1: every y = 1 point
    // saturates the capacity, so condition (2) must fail, naming location 1.
    TightPlane cap_plane;
    cap_plane.coeffs = {{VariableId::x(0, 0), Rational(1)},
                        {VariableId::y(0), -inst.c(0)}};
    cap_plane.rhs = Rational(0);
    Instance small = inst;
    small.demand = {{5, 1}, {1, 2}};  // d_11 > c_1 so the capacity face is a facet of Z
    const auto tight = tight_vertices_of_restriction(small, sub, cap_plane);
    const auto v = affinely_independent_subset(tight);
    REQUIRE(v.size() == 3);
    try {
        extension_points(small, sub, v, cap_plane);
        FAIL("expected condition (2) failure");
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find("condition (2)") != std::string::npos);
        CHECK(std::string(e.what()).find("location 1") != std::string::npos);
    }
}

TEST_CASE("extension rejects a wrong-sized tight set") {
    const Instance inst = demand_cut_instance();
    const IndexSubsets sub = IndexSubsets::checked({0}, {0}, {}, inst);
    const auto tight = tight_vertices_of_restriction(inst, sub, demand_link_plane(inst));
    auto v = affinely_independent_subset(tight);
    v.pop_back();
    CHECK_THROWS_AS(extension_points(inst, sub, v, demand_link_plane(inst)),
                    std::invalid_argument);
}
