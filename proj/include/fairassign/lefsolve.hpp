#pragma once

#include "fairassign/model.hpp"
#include "fairassign/simplex.hpp"

#include <optional>
#include <string>
#include <vector>

namespace fairassign {

inline constexpr int kLefAgentLimit = 8;

/// Every injective agent -> item map that uses only positive entries of the
/// assignment, in lexicographic (agent, item) order. Throws SizeGuardError
/// above kLefAgentLimit agents.
std::vector<SimpleAssignment> enumerate_support_assignments(const RandomAssignment& assignment,
                                                            const Instance& instance);

/// The LP whose feasible points are lotteries over `support` that induce the
/// assignment and meet every pairwise likelihood bound
///   sum_f w_f [f(i) >_i f(j)] >= Pr[sigma(i) < sigma(j)].
/// Pairs with zero priority likelihood are omitted.
struct LefProgram {
    std::vector<SimpleAssignment> support;
    LinearProgram program;
    std::vector<std::string> row_labels;
};

LefProgram build_lef_program(const RandomAssignment& assignment, const RandomPriority& priority,
                             const Instance& instance);

struct LefResult {
    bool feasible = false;
    std::optional<Lottery> witness;
    // Infeasible only: Farkas multipliers per labelled row of the program.
    std::vector<std::pair<std::string, Rational>> certificate;
    std::string note;
};

/// Decides whether any lottery inducing the assignment is likelihood
/// envy-free under the priority.
LefResult lef_feasible(const RandomAssignment& assignment, const RandomPriority& priority,
                       const Instance& instance);

}  // namespace fairassign
