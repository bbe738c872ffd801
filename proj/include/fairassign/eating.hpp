#pragma once

#include "fairassign/model.hpp"

#include <vector>

namespace fairassign {

/// Dense directed graph without self loops.
class Digraph {
public:
    explicit Digraph(int vertex_count);

    int size() const { return n_; }
    bool has_edge(int from, int to) const { return adj_[from * n_ + to] != 0; }
    void add_edge(int from, int to);
    const std::vector<int>& successors(int vertex) const { return out_[vertex]; }

private:
    int n_;
    std::vector<char> adj_;
    std::vector<std::vector<int>> out_;
};

/// Directed graph on agents: i -> j (i != j) iff S_i weakly first-order
/// stochastically dominates S_j under the identity order on positions.
/// Agents with identical rank distributions are joined both ways.
using SDGraph = Digraph;

SDGraph build_sd_graph(const RandomPriority& priority);

/// Strongly connected components of a graph and the DAG between them.
/// Components are numbered in topological order (every DAG edge goes from a
/// lower to a higher component id); members are sorted.
struct Condensation {
    std::vector<std::vector<int>> components;
    std::vector<int> component_of;
    std::vector<std::vector<int>> dag_successors;  // deduplicated, sorted
    std::vector<int> in_degree;

    std::vector<int> sources() const;
};

Condensation condense(const Digraph& graph);

/// One eating-event boundary: `consumed + remaining` is conserved.
struct EatingEvent {
    Rational time;
    Rational consumed;
    Rational remaining;
};

struct ServingResult {
    Matrix rows;                    // one row per requested agent, over all items
    std::vector<Rational> leftover; // supply after the agents are full
};

/// Probabilistic Serial over the given agents and (possibly fractional)
/// supplies: every unfinished agent eats its favourite item with supply left
/// at unit speed until it holds one unit. Throws InputError when the total
/// supply is smaller than the number of agents.
ServingResult probabilistic_serial(const Instance& instance, const std::vector<AgentId>& agents,
                                   std::vector<Rational> supply, std::vector<EatingEvent>* trace = nullptr);

/// Full-unit-supply convenience form over all agents.
RandomAssignment probabilistic_serial(const Instance& instance);

/// Cycle Elimination: repeatedly serve the union of source components of the
/// SD-graph with Probabilistic Serial on the supply left by earlier layers.
RandomAssignment cycle_elimination(const Instance& instance, const RandomPriority& priority,
                                   std::vector<EatingEvent>* trace = nullptr);

/// Agent layers in the order Cycle Elimination serves them.
std::vector<std::vector<AgentId>> elimination_layers(const RandomPriority& priority);

/// Unit-Time Eating: in unit phase t, agent i eats its favourite remaining
/// item at rate Pr[sigma(i) = t].
RandomAssignment unit_time_eating(const Instance& instance, const RandomPriority& priority,
                                  std::vector<EatingEvent>* trace = nullptr);

}  // namespace fairassign
