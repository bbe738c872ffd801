#pragma once

#include "fairassign/rational.hpp"

#include <vector>

namespace fairassign {

enum class Sense { less_equal, equal, greater_equal };

struct Constraint {
    std::vector<Rational> coefficients;
    Sense sense = Sense::equal;
    Rational rhs;
};

/// maximize objective . x  subject to constraints, x >= 0.
/// An empty objective asks for feasibility only.
struct LinearProgram {
    int variable_count = 0;
    std::vector<Constraint> constraints;
    std::vector<Rational> objective;
};

enum class LpStatus { optimal, infeasible, unbounded };

struct LpSolution {
    LpStatus status = LpStatus::infeasible;
    std::vector<Rational> x;
    Rational objective;
    // Infeasible programs only: multipliers y, one per constraint, with
    // y >= 0 on >= rows, y <= 0 on <= rows, y^T A <= 0 and y^T b > 0.
    std::vector<Rational> farkas;
    long pivots = 0;
};

/// Two-phase primal simplex over exact rationals with Bland's rule. There
/// are no tolerances: every comparison is exact.
LpSolution solve_lp(const LinearProgram& program);

/// True iff `y` is a Farkas infeasibility certificate for `program` as
/// described on LpSolution::farkas.
bool verify_farkas(const LinearProgram& program, const std::vector<Rational>& y);

/// True iff x >= 0 satisfies every constraint exactly.
bool is_feasible_point(const LinearProgram& program, const std::vector<Rational>& x);

}  // namespace fairassign
