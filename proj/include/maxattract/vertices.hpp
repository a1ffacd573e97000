#pragma once

#include <cstdint>
#include <set>
#include <unordered_set>
#include <utility>
#include <vector>

#include "maxattract/simplex.hpp"

namespace maxattract {
namespace detail {

/// Complete vertex enumeration of a bounded polyhedron given as a
/// ConstraintSystem without binaries. Walks the graph of feasible simplex
/// bases depth-first: neighbours of a basis are exactly the pivots that
/// keep the right-hand side nonnegative (zero-rhs exchanges plus minimum
/// ratio steps). Returns full catalog assignments, deduplicated and in
/// lexicographic order.
inline std::vector<RVector> enumerate_vertices_catalog(const ConstraintSystem& sys,
                                                       int max_free_vars = 24) {
    const LoweredLp lp = presolve_dominated_rows(presolve_zeros(lower_system(sys)));
    if (lp.nvars > max_free_vars)
        throw SizeGuardExceeded("vertex enumeration refused: " + std::to_string(lp.nvars) +
                                " free variables exceed the limit of " +
                                std::to_string(max_free_vars));
    std::set<RVector> found;
    if (lp.nvars == 0) {
        found.insert(lp.full_assignment({}));
        return {found.begin(), found.end()};
    }
    if (lp.nvars + static_cast<int>(lp.rows.size()) > 63)
        throw SizeGuardExceeded("vertex enumeration refused: basis keys need more than 63 bits");

    Dictionary dict = feasible_dictionary(lp);
    const auto record = [&]() { found.insert(lp.full_assignment(dict.structural_values(lp.nvars))); };

    struct Move {
        int row, col;
    };
    const auto neighbour_moves = [&]() {
        std::vector<Move> moves;
        for (int j = 0; j < dict.col_count(); ++j) {
            bool zero_blocked = false;
            bool has_positive = false;
            for (int i = 0; i < dict.row_count(); ++i) {
                const Rational& a = dict.coeff(i, j);
                if (a.is_zero()) continue;
                if (a > 0) has_positive = true;
                if (dict.rhs(i).is_zero()) {
                    moves.push_back({i, j});
                    if (a > 0) zero_blocked = true;
                }
            }
            if (zero_blocked) continue;
            if (!has_positive)
                throw UnboundedError();  // a recession direction: the system is not bounded
            int best = -1;
            Rational best_t(0);
            for (int i = 0; i < dict.row_count(); ++i) {
                if (!(dict.coeff(i, j) > 0)) continue;
                const Rational t = dict.rhs(i) / dict.coeff(i, j);
                if (best < 0 || t < best_t) {
                    best = i;
                    best_t = t;
                }
            }
            for (int i = 0; i < dict.row_count(); ++i) {
                if (!(dict.coeff(i, j) > 0)) continue;
                if (dict.rhs(i) / dict.coeff(i, j) == best_t) moves.push_back({i, j});
            }
        }
        return moves;
    };

    struct Frame {
        std::vector<Move> moves;
        std::size_t next = 0;
        Move via{-1, -1};
    };

    std::unordered_set<std::uint64_t> visited;
    visited.insert(dict.basis_key());
    record();
    std::vector<Frame> stack;
    stack.push_back({neighbour_moves(), 0, {-1, -1}});
    while (!stack.empty()) {
        Frame& f = stack.back();
        if (f.next < f.moves.size()) {
            const Move mv = f.moves[f.next++];
            const std::uint64_t key = dict.basis_key() ^
                                      (std::uint64_t{1} << dict.basic_var(mv.row)) ^
                                      (std::uint64_t{1} << dict.nonbasic_var(mv.col));
            if (visited.insert(key).second) {
                dict.pivot(mv.row, mv.col);
                record();
                stack.push_back({neighbour_moves(), 0, mv});
            }
        } else {
            if (f.via.row >= 0) dict.pivot(f.via.row, f.via.col);  // exact undo
            stack.pop_back();
        }
    }
    return {found.begin(), found.end()};
}

}  // namespace detail
}  // namespace maxattract
