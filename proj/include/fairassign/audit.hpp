#pragma once

#include "fairassign/json_io.hpp"
#include "fairassign/model.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace fairassign {

/// A structured counterexample. Which fields are set depends on the property:
///  - sef / envy:  agents = {i, j}, prefix = first violated prefix length
///  - prop:        agents = {i},    prefix
///  - lef:         agents = {i, j}, required = Pr[sigma(i) < sigma(j)],
///                 achieved = Pr_L[f(i) >_i f(j)]
///  - 1lef matrix: agents = {i, j}, items = {a, b} with a >_i b,
///                 p_ib > 0 and p_ja > 0
///  - 1lef lottery: agents = {i, j}, assignment = offending support entry
///  - oe:          items = item cycle, dominating = a strictly better Q
struct Witness {
    std::vector<AgentId> agents;
    std::vector<ItemId> items;
    std::optional<std::size_t> prefix;
    std::optional<Rational> required;
    std::optional<Rational> achieved;
    std::optional<std::vector<ItemId>> assignment;
    std::optional<Matrix> dominating;
};

struct AuditReport {
    std::string property;
    bool pass = true;
    std::vector<Witness> witnesses;
};

/// `{ "property": ..., "verdict": "pass|fail", "witnesses": [...] }` with
/// agent and item names taken from the instance.
Json report_to_json(const AuditReport& report, const Instance& instance);

/// Weak first-order stochastic dominance of x over y when outcomes are
/// ranked by `order` (order[r] = outcome at rank r). Throws InputError on a
/// length mismatch.
bool sd_dominates(std::span<const Rational> x, std::span<const Rational> y, std::span<const int> order);
bool sd_dominates(std::span<const Rational> x, std::span<const Rational> y);

/// 1-based length of the first prefix where x falls below y, if any.
std::optional<std::size_t> first_dominance_violation(std::span<const Rational> x, std::span<const Rational> y,
                                                     std::span<const int> order);

AuditReport check_sef(const RandomAssignment& assignment, const RandomPriority& priority,
                      const Instance& instance);

AuditReport check_lef_lottery(const Lottery& lottery, const RandomPriority& priority, const Instance& instance);

/// Without a lottery: for every pair with Pr[sigma(i) < sigma(j)] = 1 there
/// must be no items a >_i b with p_ib > 0 and p_ja > 0, which makes every
/// inducing lottery satisfy the 1-LEF bound. With a lottery: checks the bound
/// on that lottery directly (throws InputError if it does not induce P).
AuditReport check_1lef(const RandomAssignment& assignment, const RandomPriority& priority,
                       const Instance& instance, const Lottery* lottery = nullptr);

/// Agent's rank-r probability placed on its r-th favourite item.
std::vector<Rational> baseline_allocation(const RandomPriority& priority, AgentId agent, const Instance& instance);

AuditReport check_prop(const RandomAssignment& assignment, const RandomPriority& priority,
                       const Instance& instance);

/// Ordinal efficiency via acyclicity of the item relation
/// a -> b iff some agent holding b (p_ib > 0) strictly prefers a. Unclaimed
/// supply of an item behaves like an indifferent holder willing to trade it
/// for anything. A failing report carries an item cycle and the assignment
/// obtained by trading along it, which dominates the input.
AuditReport check_oe(const RandomAssignment& assignment, const Instance& instance);

inline constexpr int kBruteForceOeLimit = 4;

/// Ordinal efficiency by exact LP: maximize the total prefix slack of a
/// candidate Q that dominates P. Throws SizeGuardError beyond 4 agents or
/// 4 items.
AuditReport check_oe_bruteforce(const RandomAssignment& assignment, const Instance& instance);

struct EnvyCount {
    long count = 0;
    std::vector<std::pair<AgentId, AgentId>> pairs;
};

/// Ordered pairs where S_i dominates S_j but P_i fails to dominate P_j
/// under agent i's preferences.
EnvyCount count_envy_pairs(const RandomAssignment& assignment, const RandomPriority& priority,
                           const Instance& instance);

/// Same as above with the rank table precomputed.
EnvyCount count_envy_pairs(const RandomAssignment& assignment, const Matrix& ranks, const Instance& instance);

/// Re-derives the violation a witness claims; true iff it reproduces.
/// `lottery` is needed for the lottery-based properties.
bool witness_holds(const AuditReport& report, const Witness& witness, const RandomAssignment& assignment,
                   const RandomPriority& priority, const Instance& instance, const Lottery* lottery = nullptr);

}  // namespace fairassign
