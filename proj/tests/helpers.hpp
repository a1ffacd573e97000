#pragma once

#include <vector>

#include "maxattract/formulation.hpp"
#include "maxattract/instance.hpp"
#include "maxattract/oracle.hpp"

namespace testhelp {

using namespace maxattract;

// Three sites, two locations: the first location attracts (2,2,1), the
// joint pattern attracts 2 from every site, capacities (4,4).
inline Instance reference_instance() {
    Instance r;
    r.m = 3;
    r.n = 2;
    r.capacity = {4, 4};
    r.demand = {{2, 1}, {2, 2}, {1, 2}};
    return r;
}

inline const char* reference_instance_json() {
    return R"({"m":3,"n":2,"capacity":[4,4],"demand":[[2,1],[2,2],[1,2]]})";
}

// The fractional LP point used across the separation tests.
inline PointXYQ reference_fractional_point() {
    Instance r = reference_instance();
    PointXYQ p = PointXYQ::zero(r.m, r.n);
    p.x_at(0, 0) = 2;
    p.x_at(1, 0) = 2;
    p.x_at(2, 1) = Rational(6, 5);
    p.y[0] = 1;
    p.y[1] = Rational(3, 10);
    p.q_at(0, 0) = 1;
    p.q_at(1, 0) = 1;
    p.q_at(2, 0) = Rational(7, 10);
    p.q_at(2, 1) = Rational(3, 10);
    return p;
}

// Max of an objective over all binary patterns by LP: the brute-force
// solver oracle.
inline Rational pattern_bruteforce_max(const Instance& inst,
                                       const std::vector<std::pair<VariableId, Rational>>& obj) {
    const ConstraintSystem lifted = build_lifted(inst);
    bool first = true;
    Rational best(0);
    for (const auto& pat : consistent_patterns(lifted)) {
        const ConstraintSystem fixed = fix_binary(lifted, pat);
        std::vector<std::pair<VariableId, Rational>> reduced;
        Rational constant(0);
        for (const auto& [id, coef] : obj) {
            if (id.kind == VarKind::Y)
                constant += coef * Rational(pat[id.loc]);
            else
                reduced.emplace_back(id, coef);
        }
        const Rational value = lp_maximize(fixed, reduced).value + constant;
        if (first || value > best) best = value;
        first = false;
    }
    return best;
}

}  // namespace testhelp
