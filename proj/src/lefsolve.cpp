#include "fairassign/lefsolve.hpp"

#include "fairassign/audit.hpp"
#include "fairassign/error.hpp"

#include <stdexcept>

namespace fairassign {

namespace {

void extend(const RandomAssignment& assignment, int agent, std::vector<ItemId>& current, std::vector<char>& used,
            std::vector<SimpleAssignment>& out) {
    const int n = assignment.agent_count();
    const int m = assignment.item_count();
    if (agent == n) {
        out.emplace_back(current, m);
        return;
    }
    for (int j = 0; j < m; ++j) {
        if (used[j] || assignment.at(agent, j) == 0) {
            continue;
        }
        used[j] = 1;
        current[agent] = j;
        extend(assignment, agent + 1, current, used, out);
        used[j] = 0;
    }
}

}  // namespace

std::vector<SimpleAssignment> enumerate_support_assignments(const RandomAssignment& assignment,
                                                            const Instance& instance) {
    require_consistent(instance, assignment);
    if (instance.agent_count() > kLefAgentLimit) {
        throw SizeGuardError("LEF feasibility is limited to " + std::to_string(kLefAgentLimit) + " agents, got " +
                             std::to_string(instance.agent_count()));
    }
    std::vector<SimpleAssignment> out;
    std::vector<ItemId> current(instance.agent_count(), -1);
    std::vector<char> used(instance.item_count(), 0);
    extend(assignment, 0, current, used, out);
    return out;
}

LefProgram build_lef_program(const RandomAssignment& assignment, const RandomPriority& priority,
                             const Instance& instance) {
    require_consistent(instance, priority);
    LefProgram lef;
    lef.support = enumerate_support_assignments(assignment, instance);
    const int vars = static_cast<int>(lef.support.size());
    const int n = instance.agent_count();
    const int m = instance.item_count();
    lef.program.variable_count = vars;

    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < m; ++j) {
            if (assignment.at(i, j) == 0) {
                continue;
            }
            Constraint c{std::vector<Rational>(vars, Rational(0)), Sense::equal, assignment.at(i, j)};
            for (int f = 0; f < vars; ++f) {
                if (lef.support[f][i] == j) {
                    c.coefficients[f] = 1;
                }
            }
            lef.program.constraints.push_back(std::move(c));
            lef.row_labels.push_back("p[" + instance.agents()[i] + "][" + instance.items()[j] + "] = " +
                                     format_rational(assignment.at(i, j)));
        }
    }
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < n; ++k) {
            if (i == k) {
                continue;
            }
            Rational required = priority.prob_before(i, k);
            if (required == 0) {
                continue;
            }
            Constraint c{std::vector<Rational>(vars, Rational(0)), Sense::greater_equal, required};
            for (int f = 0; f < vars; ++f) {
                if (instance.prefers(i, lef.support[f][i], lef.support[f][k])) {
                    c.coefficients[f] = 1;
                }
            }
            lef.program.constraints.push_back(std::move(c));
            lef.row_labels.push_back("Pr[f(" + instance.agents()[i] + ") >_" + instance.agents()[i] + " f(" +
                                     instance.agents()[k] + ")] >= " + format_rational(required));
        }
    }
    return lef;
}

LefResult lef_feasible(const RandomAssignment& assignment, const RandomPriority& priority,
                       const Instance& instance) {
    const LefProgram lef = build_lef_program(assignment, priority, instance);
    LefResult result;
    if (lef.support.empty()) {
        result.note = "assignment support admits no perfect matching";
        return result;
    }
    const LpSolution solution = solve_lp(lef.program);
    if (solution.status == LpStatus::infeasible) {
        for (std::size_t r = 0; r < solution.farkas.size(); ++r) {
            if (solution.farkas[r] != 0) {
                result.certificate.emplace_back(lef.row_labels[r], solution.farkas[r]);
            }
        }
        result.note = "no lottery inducing the assignment meets every pairwise likelihood bound; "
                      "the listed multipliers combine the constraints into 0 >= " +
                      [&] {
                          Rational rhs = 0;
                          for (std::size_t r = 0; r < solution.farkas.size(); ++r) {
                              rhs += solution.farkas[r] * lef.program.constraints[r].rhs;
                          }
                          return format_rational(rhs);
                      }();
        return result;
    }

    std::vector<Lottery::Entry> entries;
    for (std::size_t f = 0; f < lef.support.size(); ++f) {
        if (solution.x[f] > 0) {
            entries.emplace_back(lef.support[f], solution.x[f]);
        }
    }
    Lottery witness(std::move(entries));
    if (!(assignment_from_lottery(witness) == assignment) || !check_lef_lottery(witness, priority, instance).pass) {
        throw std::logic_error("LEF witness lottery failed re-validation");
    }
    result.feasible = true;
    result.witness = std::move(witness);
    result.note = "lottery over " + std::to_string(result.witness->size()) + " assignments";
    return result;
}

}  // namespace fairassign
