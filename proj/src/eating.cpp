#include "fairassign/eating.hpp"

#include "fairassign/error.hpp"

#include <algorithm>

namespace fairassign {

Digraph::Digraph(int vertex_count)
    : n_(vertex_count), adj_(static_cast<std::size_t>(vertex_count) * vertex_count, 0), out_(vertex_count) {}

void Digraph::add_edge(int from, int to) {
    char& slot = adj_[from * n_ + to];
    if (!slot) {
        slot = 1;
        out_[from].push_back(to);
    }
}

SDGraph build_sd_graph(const RandomPriority& priority) {
    const int n = priority.agent_count();
    // Scale every weight to a common denominator so dominance reduces to
    // comparing integer prefix sums.
    mpz_class common = 1;
    for (const auto& [sigma, weight] : priority.entries()) {
        mpz_lcm(common.get_mpz_t(), common.get_mpz_t(), weight.get_den().get_mpz_t());
    }
    std::vector<std::vector<mpz_class>> cumulative(n, std::vector<mpz_class>(n, 0));
    for (const auto& [sigma, weight] : priority.entries()) {
        const mpz_class scaled = weight.get_num() * (common / weight.get_den());
        for (int i = 0; i < n; ++i) {
            cumulative[i][sigma.position(i)] += scaled;
        }
    }
    for (auto& row : cumulative) {
        for (int t = 1; t < n; ++t) {
            row[t] += row[t - 1];
        }
    }

    SDGraph graph(n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i == j) {
                continue;
            }
            bool dominates = true;
            for (int t = 0; t < n && dominates; ++t) {
                dominates = cumulative[i][t] >= cumulative[j][t];
            }
            if (dominates) {
                graph.add_edge(i, j);
            }
        }
    }
    return graph;
}

std::vector<int> Condensation::sources() const {
    std::vector<int> out;
    for (std::size_t c = 0; c < in_degree.size(); ++c) {
        if (in_degree[c] == 0) {
            out.push_back(static_cast<int>(c));
        }
    }
    return out;
}

Condensation condense(const Digraph& graph) {
    // Iterative Tarjan.
    const int n = graph.size();
    std::vector<int> index(n, -1), low(n, 0), reverse_component(n, -1);
    std::vector<char> on_stack(n, 0);
    std::vector<AgentId> stack;
    std::vector<std::pair<AgentId, std::size_t>> call;
    std::vector<std::vector<AgentId>> found;
    int counter = 0;

    for (int root = 0; root < n; ++root) {
        if (index[root] != -1) {
            continue;
        }
        call.emplace_back(root, 0);
        while (!call.empty()) {
            auto& [v, next] = call.back();
            if (next == 0 && index[v] == -1) {
                index[v] = low[v] = counter++;
                stack.push_back(v);
                on_stack[v] = 1;
            }
            const auto& succ = graph.successors(v);
            if (next < succ.size()) {
                const AgentId w = succ[next++];
                if (index[w] == -1) {
                    call.emplace_back(w, 0);
                } else if (on_stack[w]) {
                    low[v] = std::min(low[v], index[w]);
                }
                continue;
            }
            if (low[v] == index[v]) {
                std::vector<AgentId> component;
                AgentId w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = 0;
                    reverse_component[w] = static_cast<int>(found.size());
                    component.push_back(w);
                } while (w != v);
                std::sort(component.begin(), component.end());
                found.push_back(std::move(component));
            }
            const AgentId finished = v;
            call.pop_back();
            if (!call.empty()) {
                low[call.back().first] = std::min(low[call.back().first], low[finished]);
            }
        }
    }

    // Tarjan emits sinks first; flip to topological order.
    Condensation result;
    const int k = static_cast<int>(found.size());
    result.components.assign(found.rbegin(), found.rend());
    result.component_of.resize(n);
    for (int v = 0; v < n; ++v) {
        result.component_of[v] = k - 1 - reverse_component[v];
    }
    result.dag_successors.assign(k, {});
    for (int v = 0; v < n; ++v) {
        for (AgentId w : graph.successors(v)) {
            const int cv = result.component_of[v];
            const int cw = result.component_of[w];
            if (cv != cw) {
                result.dag_successors[cv].push_back(cw);
            }
        }
    }
    result.in_degree.assign(k, 0);
    for (auto& succ : result.dag_successors) {
        std::sort(succ.begin(), succ.end());
        succ.erase(std::unique(succ.begin(), succ.end()), succ.end());
        for (int c : succ) {
            ++result.in_degree[c];
        }
    }
    return result;
}

namespace {

// Advances `cursor` past exhausted items and returns the agent's current
// favourite item with supply left.
ItemId favourite_remaining(const Instance& instance, AgentId agent, std::size_t& cursor,
                           const std::vector<Rational>& supply) {
    const auto order = instance.order(agent);
    while (cursor < order.size() && supply[order[cursor]] == 0) {
        ++cursor;
    }
    if (cursor == order.size()) {
        throw InputError("no supply left for agent '" + instance.agents()[agent] + "'");
    }
    return order[cursor];
}

}  // namespace

ServingResult probabilistic_serial(const Instance& instance, const std::vector<AgentId>& agents,
                                   std::vector<Rational> supply, std::vector<EatingEvent>* trace) {
    const int m = instance.item_count();
    if (static_cast<int>(supply.size()) != m) {
        throw InputError("supply vector length differs from the item count");
    }
    for (const auto& s : supply) {
        if (s < 0 || s > 1) {
            throw InputError("item supply " + format_rational(s) + " lies outside [0,1]");
        }
    }
    if (sum(supply) < static_cast<long>(agents.size())) {
        throw InputError("total supply " + format_rational(sum(supply)) + " is insufficient for " +
                         std::to_string(agents.size()) + " agents");
    }

    const std::size_t k = agents.size();
    ServingResult result{Matrix(k, std::vector<Rational>(m, Rational(0))), {}};
    std::vector<std::size_t> cursor(k, 0);
    std::vector<ItemId> target(k, 0);
    std::vector<int> eaters(m, 0);
    std::vector<ItemId> touched;
    Rational time = 0;
    Rational dt, candidate;

    auto record = [&] {
        if (trace == nullptr) {
            return;
        }
        Rational consumed = 0;
        for (const auto& row : result.rows) {
            consumed += sum(row);
        }
        trace->push_back({time, consumed, sum(supply)});
    };
    record();

    // Every agent starts at time 0 and eats at unit speed, so all of them are
    // full exactly at time 1.
    while (k > 0 && time < 1) {
        touched.clear();
        for (std::size_t a = 0; a < k; ++a) {
            target[a] = favourite_remaining(instance, agents[a], cursor[a], supply);
            if (eaters[target[a]]++ == 0) {
                touched.push_back(target[a]);
            }
        }
        dt = 1 - time;
        for (ItemId j : touched) {
            candidate = supply[j] / eaters[j];
            if (candidate < dt) {
                dt = candidate;
            }
        }
        for (std::size_t a = 0; a < k; ++a) {
            result.rows[a][target[a]] += dt;
        }
        for (ItemId j : touched) {
            supply[j] -= dt * eaters[j];
            eaters[j] = 0;
        }
        time += dt;
        record();
    }
    result.leftover = std::move(supply);
    return result;
}

RandomAssignment probabilistic_serial(const Instance& instance) {
    std::vector<AgentId> agents(instance.agent_count());
    for (int i = 0; i < instance.agent_count(); ++i) {
        agents[i] = i;
    }
    auto served = probabilistic_serial(instance, agents, std::vector<Rational>(instance.item_count(), Rational(1)));
    return RandomAssignment(std::move(served.rows));
}

std::vector<std::vector<AgentId>> elimination_layers(const RandomPriority& priority) {
    const Condensation dag = condense(build_sd_graph(priority));
    std::vector<int> in_degree = dag.in_degree;
    std::vector<int> frontier = dag.sources();
    std::vector<std::vector<AgentId>> layers;
    while (!frontier.empty()) {
        std::vector<AgentId> layer;
        std::vector<int> next;
        for (int c : frontier) {
            layer.insert(layer.end(), dag.components[c].begin(), dag.components[c].end());
            for (int d : dag.dag_successors[c]) {
                if (--in_degree[d] == 0) {
                    next.push_back(d);
                }
            }
        }
        std::sort(layer.begin(), layer.end());
        std::sort(next.begin(), next.end());
        layers.push_back(std::move(layer));
        frontier = std::move(next);
    }
    return layers;
}

RandomAssignment cycle_elimination(const Instance& instance, const RandomPriority& priority,
                                   std::vector<EatingEvent>* trace) {
    require_consistent(instance, priority);
    const int m = instance.item_count();
    Matrix p(instance.agent_count(), std::vector<Rational>(m, Rational(0)));
    std::vector<Rational> supply(m, Rational(1));
    long served_agents = 0;
    long layer_index = 0;
    for (const auto& layer : elimination_layers(priority)) {
        std::vector<EatingEvent> layer_trace;
        auto served = probabilistic_serial(instance, layer, std::move(supply), trace ? &layer_trace : nullptr);
        for (std::size_t a = 0; a < layer.size(); ++a) {
            p[layer[a]] = std::move(served.rows[a]);
        }
        supply = std::move(served.leftover);
        if (trace != nullptr) {
            for (auto& event : layer_trace) {
                trace->push_back({event.time + layer_index, event.consumed + served_agents, event.remaining});
            }
        }
        served_agents += static_cast<long>(layer.size());
        ++layer_index;
    }
    return RandomAssignment(std::move(p));
}

RandomAssignment unit_time_eating(const Instance& instance, const RandomPriority& priority,
                                  std::vector<EatingEvent>* trace) {
    require_consistent(instance, priority);
    const int n = instance.agent_count();
    const int m = instance.item_count();
    const Matrix rates = rank_table(priority);
    Matrix p(n, std::vector<Rational>(m, Rational(0)));
    std::vector<Rational> supply(m, Rational(1));
    std::vector<std::size_t> cursor(n, 0);
    std::vector<Rational> item_rate(m, Rational(0));
    std::vector<char> is_touched(m, 0);
    std::vector<ItemId> touched;
    std::vector<ItemId> target(n, 0);
    Rational consumed = 0;
    Rational dt, candidate;

    auto record = [&](const Rational& time) {
        if (trace != nullptr) {
            trace->push_back({time, consumed, sum(supply)});
        }
    };
    record(0);

    for (int phase = 0; phase < n; ++phase) {
        std::vector<AgentId> eaters;
        for (int i = 0; i < n; ++i) {
            if (rates[i][phase] > 0) {
                eaters.push_back(i);
            }
        }
        Rational left = 1;
        while (left > 0 && !eaters.empty()) {
            touched.clear();
            for (AgentId i : eaters) {
                target[i] = favourite_remaining(instance, i, cursor[i], supply);
                if (!is_touched[target[i]]) {
                    is_touched[target[i]] = 1;
                    touched.push_back(target[i]);
                    item_rate[target[i]] = 0;
                }
                item_rate[target[i]] += rates[i][phase];
            }
            // Ties are harmless: every item exhausted at the same instant is
            // drained in this step, in item-index order.
            std::sort(touched.begin(), touched.end());
            dt = left;
            for (ItemId j : touched) {
                candidate = supply[j] / item_rate[j];
                if (candidate < dt) {
                    dt = candidate;
                }
            }
            for (AgentId i : eaters) {
                candidate = rates[i][phase] * dt;
                p[i][target[i]] += candidate;
                consumed += candidate;
            }
            for (ItemId j : touched) {
                supply[j] -= item_rate[j] * dt;
                is_touched[j] = 0;
            }
            left -= dt;
            record(phase + 1 - left);
        }
    }
    return RandomAssignment(std::move(p));
}

}  // namespace fairassign
