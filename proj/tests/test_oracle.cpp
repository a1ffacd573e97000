#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "helpers.hpp"
#include "maxattract/oracle.hpp"

using namespace maxattract;
using testhelp::reference_instance;

namespace {

std::vector<std::pair<VariableId, Rational>> total_service_objective(int m, int n) {
    std::vector<std::pair<VariableId, Rational>> obj;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) obj.emplace_back(VariableId::x(i, j), 1);
    return obj;
}

Instance tiny_instance() {
    Instance t;
    t.m = t.n = 1;
    t.capacity = {2};
    t.demand = {{3}};
    return t;
}

}  // namespace

TEST_CASE("lp_maximize reproduces the documented service maxima") {
    const Instance r = reference_instance();
    const ConstraintSystem lifted = build_lifted(r);
    const auto obj = total_service_objective(3, 2);
    CHECK(lp_maximize(fix_binary(lifted, {1, 1}), obj).value == Rational(6));
    CHECK(lp_maximize(fix_binary(lifted, {0, 0}), obj).value == Rational(0));
    const Instance t = tiny_instance();
    CHECK(lp_maximize(fix_binary(build_lifted(t), {1}), total_service_objective(1, 1)).value ==
          Rational(2));
}

TEST_CASE("lp_maximize rejects systems that still have binaries") {
    const Instance r = reference_instance();
    CHECK_THROWS_AS(lp_maximize(build_lifted(r), total_service_objective(3, 2)),
                    std::invalid_argument);
}

TEST_CASE("lp_maximize detects unbounded and infeasible systems") {
    ConstraintSystem sys;
    const int x = sys.add_variable(VariableId::x(0, 0));
    CHECK_THROWS_AS(lp_maximize(sys, {{VariableId::x(0, 0), Rational(1)}}), UnboundedError);

    ConstraintSystem infeasible;
    const int z = infeasible.add_variable(VariableId::x(0, 0));
    infeasible.add_row({{z, Rational(-1)}}, Relation::LessEq, Rational(-5), RowTag::Cut);
    infeasible.add_row({{z, Rational(1)}}, Relation::LessEq, Rational(3), RowTag::Cut);
    CHECK_THROWS_AS(lp_maximize(infeasible, {{VariableId::x(0, 0), Rational(1)}}),
                    InfeasibleError);
    (void)x;
}

TEST_CASE("phase one recovers a feasible start from a negative rhs") {
    // x >= 1 written as -x <= -1, maximize -x: optimum at x = 1.
    ConstraintSystem sys;
    const int x = sys.add_variable(VariableId::x(0, 0));
    sys.add_row({{x, Rational(-1)}}, Relation::LessEq, Rational(-1), RowTag::Cut);
    sys.add_row({{x, Rational(1)}}, Relation::LessEq, Rational(3), RowTag::Cut);
    const LpOptimum opt = lp_maximize(sys, {{VariableId::x(0, 0), Rational(-1)}});
    CHECK(opt.value == Rational(-1));
    CHECK(opt.assignment[0] == Rational(1));
}

TEST_CASE("vertex enumeration matches the hand-enumerated tiny slice") {
    const Instance t = tiny_instance();
    const VertexSet vs = enumerate_vertices(fix_binary(build_lifted(t), {1}));
    REQUIRE(vs.points.size() == 4);
    // lexicographic in (x, q)
    CHECK(vs.points[0] == RVector{0, 0});
    CHECK(vs.points[1] == RVector{0, 1});
    CHECK(vs.points[2] == RVector{2, Rational(2, 3)});
    CHECK(vs.points[3] == RVector{2, 1});
}

TEST_CASE("the closed pattern has a single vertex at the origin") {
    const Instance t = tiny_instance();
    const VertexSet vs = enumerate_vertices(fix_binary(build_lifted(t), {0}));
    REQUIRE(vs.points.size() == 1);
    CHECK(vs.points[0] == RVector{0, 0});
}

TEST_CASE("the unit box has exactly its corner vertices") {
    ConstraintSystem box;
    const int q = box.add_variable(VariableId::q(0, 0));
    box.add_row({{q, Rational(1)}}, Relation::LessEq, Rational(1), RowTag::QBound);
    const VertexSet vs = enumerate_vertices(box);
    REQUIRE(vs.points.size() == 2);
    CHECK(vs.points[0] == RVector{0});
    CHECK(vs.points[1] == RVector{1});
}

TEST_CASE("the size guard refuses oversized systems") {
    ConstraintSystem big;
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) {
            const int k = big.add_variable(VariableId::x(i, j));
            big.add_row({{k, Rational(1)}}, Relation::LessEq, Rational(1), RowTag::QBound);
        }
    CHECK_THROWS_AS(enumerate_vertices(big), SizeGuardExceeded);
}

TEST_CASE("LP optimum equals the maximum over enumerated vertices") {
    std::mt19937_64 rng(37);
    for (int t = 0; t < 25; ++t) {
        const int m = 1 + static_cast<int>(rng() % 2), n = 1 + static_cast<int>(rng() % 2);
        const Instance inst = generate_random(m, n, rng());
        const ConstraintSystem lifted = build_lifted(inst);
        std::vector<int> pat(n);
        for (auto& b : pat) b = static_cast<int>(rng() % 2);
        const ConstraintSystem fixed = fix_binary(lifted, pat);
        std::vector<std::pair<VariableId, Rational>> obj;
        for (int k = 0; k < fixed.var_count(); ++k)
            obj.emplace_back(fixed.var(k).id, Rational(static_cast<long long>(rng() % 9) - 4));
        const Rational lp = lp_maximize(fixed, obj).value;
        Rational best;
        bool first = true;
        for (const auto& p : enumerate_vertices(fixed).points) {
            Rational v(0);
            for (const auto& [id, coef] : obj) v += coef * p[fixed.index_of(id)];
            if (first || v > best) best = v;
            first = false;
        }
        CHECK(lp == best);
    }
}

TEST_CASE("check_valid confirms the facet cut with zero slack at the right witness") {
    const Instance r = reference_instance();
    const LinearInequality cut = critical_facet_cut(r, {0, 1, 2}, {0, 1});
    const ValidityReport rep = check_valid(r, cut);
    CHECK(rep.valid);
    CHECK(rep.slack == Rational(0));
    CHECK(rep.worst_pattern == std::vector<int>{1, 0});  // first pattern reaching max LHS
    CHECK(build_lifted(r).satisfies(rep.maximizing_point.flat()));
}

TEST_CASE("check_valid rejects the tampered cut with the documented witness") {
    const Instance r = reference_instance();
    LinearInequality cut = critical_facet_cut(r, {0, 1, 2}, {0, 1});
    cut.rhs = Rational(1);  // tampered
    const ValidityReport rep = check_valid(r, cut);
    CHECK_FALSE(rep.valid);
    CHECK(rep.slack == Rational(-1));
    CHECK(rep.worst_pattern == std::vector<int>{1, 0});
}

TEST_CASE("check_valid accepts the trivial cut 0 <= 0") {
    const Instance r = reference_instance();
    LinearInequality cut;
    cut.subsets = IndexSubsets::checked({0}, {0}, {}, r);
    const ValidityReport rep = check_valid(r, cut);
    CHECK(rep.valid);
    CHECK(rep.slack == Rational(0));
}

TEST_CASE("parallel check_valid agrees with the sequential fold") {
    const Instance r = reference_instance();
    const LinearInequality cut = critical_facet_cut(r, {0, 1, 2}, {0, 1});
    const ValidityReport a = check_valid(r, cut, 1);
    const ValidityReport b = check_valid(r, cut, 4);
    CHECK(a.valid == b.valid);
    CHECK(a.slack == b.slack);
    CHECK(a.worst_pattern == b.worst_pattern);
    CHECK(a.maximizing_point == b.maximizing_point);
}

TEST_CASE("polytope dimension matches the closed formula on the documented cases") {
    CHECK(polytope_dimension(reference_instance()) == 14);  // (2*3+1)*2
    CHECK(polytope_dimension(tiny_instance()) == 3);        // (2*1+1)*1
}

TEST_CASE("zero demand can drop the dimension below the formula") {
    Instance z;
    z.m = 1;
    z.n = 1;
    z.capacity = {2};
    z.demand = {{0}};
    // With d_11 = 0 no service is possible: only (x,q,y) = (0,q,y) survive.
    const int dim = polytope_dimension(z);
    CHECK(dim < 3);
    CHECK(dim == 2);
}

TEST_CASE("check_facet classifies the reference facet cut") {
    const Instance r = reference_instance();
    const FacetReport rep = check_facet(r, critical_facet_cut(r, {0, 1, 2}, {0, 1}));
    CHECK(rep.dimension == 14);
    CHECK(rep.face_dimension == 13);
    CHECK(rep.classification == FacetReport::Classification::Facet);
}

TEST_CASE("check_facet reports plain capacity rows as the rank evidence shows") {
    const Instance r = reference_instance();
    LinearInequality cut;
    cut.subsets = IndexSubsets::checked({0, 1, 2}, {0}, {}, r);
    for (int i = 0; i < 3; ++i) cut.coeff_x.emplace_back(std::make_pair(i, 0), Rational(1));
    cut.coeff_y.emplace_back(0, Rational(-4));
    cut.rhs = Rational(0);  // sum_i x_i1 <= 4 y_1
    const FacetReport rep = check_facet(r, cut);
    CHECK(rep.dimension == 14);
    CHECK(rep.face_dimension >= 0);
    CHECK((rep.classification == FacetReport::Classification::Facet ||
           rep.classification == FacetReport::Classification::LowerFace));
}

TEST_CASE("check_facet reports empty faces and invalid cuts") {
    const Instance r = reference_instance();
    LinearInequality loose;
    loose.subsets = IndexSubsets::checked({0}, {0}, {}, r);
    loose.coeff_x.emplace_back(std::make_pair(0, 0), Rational(1));
    loose.rhs = Rational(100);
    CHECK(check_facet(r, loose).classification == FacetReport::Classification::EmptyFace);

    LinearInequality bad = loose;
    bad.rhs = Rational(-1);
    CHECK(check_facet(r, bad).classification == FacetReport::Classification::NotValid);
}

TEST_CASE("projection equivalence holds on the documented instances") {
    CHECK(check_projection(tiny_instance()));
    CHECK(check_projection(reference_instance()));
}

TEST_CASE("projection equivalence holds across a random desk-scale corpus") {
    std::mt19937_64 rng(41);
    for (int t = 0; t < 25; ++t) {
        const int m = 1 + static_cast<int>(rng() % 2), n = 1 + static_cast<int>(rng() % 2);
        CHECK(check_projection(generate_random(m, n, rng())));
    }
}

TEST_CASE("a cut reported valid holds at every enumerated vertex") {
    const Instance r = reference_instance();
    const ConstraintSystem lifted = build_lifted(r);
    for (const auto& cut : {critical_facet_cut(r, {0, 1, 2}, {0, 1}),
                            single_location_cut(r, {0, 1, 2}, {0}, 1),
                            multi_location_cut(r, {0, 1, 2}, {0})}) {
        REQUIRE(check_valid(r, cut).valid);
        for (const auto& pv : detail::vertices_by_pattern(lifted)) {
            for (const auto& a : pv.points) {
                CHECK(detail::cut_lhs_on_catalog(lifted, cut, a) <= cut.rhs);
            }
        }
    }
}

TEST_CASE("condition-satisfying pairs always produce facets on a desk corpus") {
    std::mt19937_64 rng(83);
    int facets = 0;
    for (int t = 0; t < 30; ++t) {
        const int m = 1 + static_cast<int>(rng() % 2), n = 2;
        const Instance inst = generate_random(m, n, rng());
        for (std::uint32_t im = 1; im < (1u << m); ++im) {
            std::vector<int> I;
            for (int i = 0; i < m; ++i)
                if (im & (1u << i)) I.push_back(i);
            const std::vector<int> J{0, 1};
            if (!facet_conditions(inst, I, J).all_hold) continue;
            ++facets;
            const FacetReport rep = check_facet(inst, critical_facet_cut(inst, I, J));
            CHECK(rep.classification == FacetReport::Classification::Facet);
        }
    }
    CHECK(facets > 0);  // the corpus must actually exercise the theorem
}

TEST_CASE("check_valid refuses oversized pattern spaces") {
    Instance wide;
    wide.m = 1;
    wide.n = 17;
    wide.capacity.assign(17, Rational(1));
    wide.demand = {RVector(17, Rational(1))};
    LinearInequality cut;
    cut.subsets = IndexSubsets::checked({0}, {0}, {}, wide);
    cut.coeff_x.emplace_back(std::make_pair(0, 0), Rational(1));
    cut.rhs = Rational(100);
    CHECK_THROWS_AS(check_valid(wide, cut), SizeGuardExceeded);
}
