#include "fairassign/audit.hpp"

#include "fairassign/eating.hpp"
#include "fairassign/error.hpp"
#include "fairassign/simplex.hpp"

#include <deque>

namespace fairassign {

namespace {

std::vector<int> identity_order(std::size_t size) {
    std::vector<int> order(size);
    for (std::size_t r = 0; r < size; ++r) {
        order[r] = static_cast<int>(r);
    }
    return order;
}

Json rational_json(const Rational& value) { return format_rational(value); }

bool dominates_all(const Matrix& q, const RandomAssignment& p, const Instance& instance) {
    for (int i = 0; i < instance.agent_count(); ++i) {
        if (!sd_dominates(q[i], p.row(i), instance.order(i))) {
            return false;
        }
    }
    return true;
}

Rational likelihood_preferred(const Lottery& lottery, AgentId i, AgentId j, const Instance& instance) {
    Rational achieved = 0;
    for (const auto& [f, weight] : lottery.entries()) {
        if (instance.prefers(i, f[i], f[j])) {
            achieved += weight;
        }
    }
    return achieved;
}

bool is_valid_assignment(const Matrix& q) {
    try {
        RandomAssignment check(q);
        return true;
    } catch (const InputError&) {
        return false;
    }
}

}  // namespace

std::optional<std::size_t> first_dominance_violation(std::span<const Rational> x, std::span<const Rational> y,
                                                     std::span<const int> order) {
    if (x.size() != y.size() || x.size() != order.size()) {
        throw InputError("stochastic dominance compares vectors of different lengths");
    }
    Rational px = 0, py = 0;
    for (std::size_t r = 0; r < order.size(); ++r) {
        px += x[order[r]];
        py += y[order[r]];
        if (px < py) {
            return r + 1;
        }
    }
    return std::nullopt;
}

bool sd_dominates(std::span<const Rational> x, std::span<const Rational> y, std::span<const int> order) {
    return !first_dominance_violation(x, y, order).has_value();
}

bool sd_dominates(std::span<const Rational> x, std::span<const Rational> y) {
    const auto order = identity_order(x.size());
    return sd_dominates(x, y, order);
}

EnvyCount count_envy_pairs(const RandomAssignment& assignment, const Matrix& ranks, const Instance& instance) {
    require_consistent(instance, assignment);
    const int n = instance.agent_count();
    const auto positions = identity_order(n);
    EnvyCount result;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i == j || !sd_dominates(ranks[i], ranks[j], positions)) {
                continue;
            }
            if (!sd_dominates(assignment.row(i), assignment.row(j), instance.order(i))) {
                ++result.count;
                result.pairs.emplace_back(i, j);
            }
        }
    }
    return result;
}

EnvyCount count_envy_pairs(const RandomAssignment& assignment, const RandomPriority& priority,
                           const Instance& instance) {
    require_consistent(instance, priority);
    return count_envy_pairs(assignment, rank_table(priority), instance);
}

AuditReport check_sef(const RandomAssignment& assignment, const RandomPriority& priority,
                      const Instance& instance) {
    AuditReport report{"sef", true, {}};
    for (const auto& [i, j] : count_envy_pairs(assignment, priority, instance).pairs) {
        Witness w;
        w.agents = {i, j};
        w.prefix = first_dominance_violation(assignment.row(i), assignment.row(j), instance.order(i));
        report.witnesses.push_back(std::move(w));
    }
    report.pass = report.witnesses.empty();
    return report;
}

AuditReport check_lef_lottery(const Lottery& lottery, const RandomPriority& priority, const Instance& instance) {
    require_consistent(instance, priority);
    if (lottery.agent_count() != instance.agent_count() || lottery.item_count() != instance.item_count()) {
        throw InputError("lottery shape differs from the instance");
    }
    AuditReport report{"lef", true, {}};
    const int n = instance.agent_count();
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i == j) {
                continue;
            }
            Rational required = priority.prob_before(i, j);
            Rational achieved = likelihood_preferred(lottery, i, j, instance);
            if (achieved < required) {
                Witness w;
                w.agents = {i, j};
                w.required = std::move(required);
                w.achieved = std::move(achieved);
                report.witnesses.push_back(std::move(w));
            }
        }
    }
    report.pass = report.witnesses.empty();
    return report;
}

AuditReport check_1lef(const RandomAssignment& assignment, const RandomPriority& priority,
                       const Instance& instance, const Lottery* lottery) {
    require_consistent(instance, priority);
    require_consistent(instance, assignment);
    if (lottery != nullptr && !(assignment_from_lottery(*lottery) == assignment)) {
        throw InputError("lottery does not induce the given assignment");
    }
    AuditReport report{"1lef", true, {}};
    const int n = instance.agent_count();
    const int m = instance.item_count();
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i == j || priority.prob_before(i, j) != 1) {
                continue;
            }
            if (lottery != nullptr) {
                for (const auto& [f, weight] : lottery->entries()) {
                    if (!instance.prefers(i, f[i], f[j])) {
                        Witness w;
                        w.agents = {i, j};
                        w.assignment = std::vector<ItemId>(f.items().begin(), f.items().end());
                        report.witnesses.push_back(std::move(w));
                    }
                }
                continue;
            }
            for (int a = 0; a < m; ++a) {
                if (assignment.at(j, a) == 0) {
                    continue;
                }
                for (int b = 0; b < m; ++b) {
                    if (assignment.at(i, b) > 0 && instance.prefers(i, a, b)) {
                        Witness w;
                        w.agents = {i, j};
                        w.items = {a, b};
                        report.witnesses.push_back(std::move(w));
                    }
                }
            }
        }
    }
    report.pass = report.witnesses.empty();
    return report;
}

std::vector<Rational> baseline_allocation(const RandomPriority& priority, AgentId agent, const Instance& instance) {
    require_consistent(instance, priority);
    const auto ranks = rank_distribution(priority, agent);
    std::vector<Rational> baseline(instance.item_count(), Rational(0));
    const auto order = instance.order(agent);
    for (std::size_t r = 0; r < ranks.size(); ++r) {
        baseline[order[r]] = ranks[r];
    }
    return baseline;
}

AuditReport check_prop(const RandomAssignment& assignment, const RandomPriority& priority,
                       const Instance& instance) {
    require_consistent(instance, assignment);
    AuditReport report{"prop", true, {}};
    for (int i = 0; i < instance.agent_count(); ++i) {
        const auto baseline = baseline_allocation(priority, i, instance);
        if (auto prefix = first_dominance_violation(assignment.row(i), baseline, instance.order(i))) {
            Witness w;
            w.agents = {i};
            w.prefix = prefix;
            report.witnesses.push_back(std::move(w));
        }
    }
    report.pass = report.witnesses.empty();
    return report;
}

AuditReport check_oe(const RandomAssignment& assignment, const Instance& instance) {
    require_consistent(instance, assignment);
    const int n = instance.agent_count();
    const int m = instance.item_count();
    std::vector<Rational> leftover(m);
    for (int j = 0; j < m; ++j) {
        leftover[j] = 1 - assignment.column_sum(j);
    }

    // Edge u -> v: whoever holds some of v would give it up for u. The holder
    // is a real agent with u >_i v (strict edge) or unclaimed supply of v.
    Digraph graph(m);
    std::vector<int> strict_holder(static_cast<std::size_t>(m) * m, -1);
    for (int i = 0; i < n; ++i) {
        const auto order = instance.order(i);
        for (int r = 0; r < m; ++r) {
            const ItemId v = order[r];
            if (assignment.at(i, v) == 0) {
                continue;
            }
            for (int s = 0; s < r; ++s) {
                const ItemId u = order[s];
                if (strict_holder[u * m + v] < 0) {
                    strict_holder[u * m + v] = i;
                    graph.add_edge(u, v);
                }
            }
        }
    }
    for (int v = 0; v < m; ++v) {
        if (leftover[v] == 0) {
            continue;
        }
        for (int u = 0; u < m; ++u) {
            if (u != v) {
                graph.add_edge(u, v);
            }
        }
    }

    AuditReport report{"oe", true, {}};
    const Condensation scc = condense(graph);
    int from = -1, to = -1;
    for (int u = 0; u < m && from < 0; ++u) {
        for (int v = 0; v < m; ++v) {
            if (strict_holder[u * m + v] >= 0 && scc.component_of[u] == scc.component_of[v]) {
                from = u;
                to = v;
                break;
            }
        }
    }
    if (from < 0) {
        return report;
    }

    // Close the cycle with a shortest path to -> from inside the component.
    std::vector<int> parent(m, -2);
    std::deque<int> queue{to};
    parent[to] = -1;
    while (!queue.empty() && parent[from] == -2) {
        const int x = queue.front();
        queue.pop_front();
        for (int y : graph.successors(x)) {
            if (parent[y] == -2 && scc.component_of[y] == scc.component_of[from]) {
                parent[y] = x;
                queue.push_back(y);
            }
        }
    }
    std::vector<ItemId> path;
    for (int x = from; x != -1; x = parent[x]) {
        path.push_back(x);
    }
    // path = from, ..., to (reversed walk); cycle reads from -> to -> ... -> from.
    std::vector<ItemId> cycle{from};
    for (auto it = path.rbegin(); it != path.rend() && *it != from; ++it) {
        cycle.push_back(*it);
    }

    // Trade epsilon along every edge of the cycle.
    const std::size_t k = cycle.size();
    std::optional<Rational> epsilon;
    std::vector<int> mover(k, -1);
    for (std::size_t t = 0; t < k; ++t) {
        const ItemId u = cycle[t];
        const ItemId v = cycle[(t + 1) % k];
        const int holder = strict_holder[u * m + v];
        const Rational available = holder >= 0 ? assignment.at(holder, v) : leftover[v];
        mover[t] = holder;
        if (!epsilon || available < *epsilon) {
            epsilon = available;
        }
    }
    Matrix q = assignment.matrix();
    for (std::size_t t = 0; t < k; ++t) {
        if (mover[t] < 0) {
            continue;
        }
        q[mover[t]][cycle[(t + 1) % k]] -= *epsilon;
        q[mover[t]][cycle[t]] += *epsilon;
    }
    Witness w;
    w.items = std::move(cycle);
    w.dominating = std::move(q);
    report.pass = false;
    report.witnesses.push_back(std::move(w));
    return report;
}

AuditReport check_oe_bruteforce(const RandomAssignment& assignment, const Instance& instance) {
    require_consistent(instance, assignment);
    const int n = instance.agent_count();
    const int m = instance.item_count();
    if (n > kBruteForceOeLimit || m > kBruteForceOeLimit) {
        throw SizeGuardError("brute-force ordinal efficiency check is limited to 4 agents and 4 items");
    }
    // Variables: q_ij (n*m), then prefix slack e_it (n*m).
    const int cells = n * m;
    LinearProgram lp;
    lp.variable_count = 2 * cells;
    lp.objective.assign(lp.variable_count, Rational(0));
    for (int v = cells; v < 2 * cells; ++v) {
        lp.objective[v] = 1;
    }
    for (int i = 0; i < n; ++i) {
        Constraint row{std::vector<Rational>(lp.variable_count, Rational(0)), Sense::equal, Rational(1)};
        for (int j = 0; j < m; ++j) {
            row.coefficients[i * m + j] = 1;
        }
        lp.constraints.push_back(std::move(row));
    }
    for (int j = 0; j < m; ++j) {
        Constraint column{std::vector<Rational>(lp.variable_count, Rational(0)), Sense::less_equal, Rational(1)};
        for (int i = 0; i < n; ++i) {
            column.coefficients[i * m + j] = 1;
        }
        lp.constraints.push_back(std::move(column));
    }
    for (int i = 0; i < n; ++i) {
        const auto order = instance.order(i);
        Rational prefix = 0;
        for (int t = 0; t < m; ++t) {
            prefix += assignment.at(i, order[t]);
            Constraint c{std::vector<Rational>(lp.variable_count, Rational(0)), Sense::equal, prefix};
            for (int r = 0; r <= t; ++r) {
                c.coefficients[i * m + order[r]] = 1;
            }
            c.coefficients[cells + i * m + t] = -1;
            lp.constraints.push_back(std::move(c));
        }
    }
    const LpSolution solution = solve_lp(lp);
    AuditReport report{"oe", true, {}};
    if (solution.status == LpStatus::optimal && solution.objective > 0) {
        Matrix q(n, std::vector<Rational>(m));
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < m; ++j) {
                q[i][j] = solution.x[i * m + j];
            }
        }
        Witness w;
        w.dominating = std::move(q);
        report.pass = false;
        report.witnesses.push_back(std::move(w));
    } else if (solution.status != LpStatus::optimal) {
        throw std::logic_error("dominance program must be feasible and bounded");
    }
    return report;
}

bool witness_holds(const AuditReport& report, const Witness& witness, const RandomAssignment& assignment,
                   const RandomPriority& priority, const Instance& instance, const Lottery* lottery) {
    const auto& p = report.property;
    if (p == "sef") {
        if (witness.agents.size() != 2) {
            return false;
        }
        const AgentId i = witness.agents[0], j = witness.agents[1];
        const auto ranks = rank_table(priority);
        return sd_dominates(ranks[i], ranks[j]) &&
               first_dominance_violation(assignment.row(i), assignment.row(j), instance.order(i)) == witness.prefix;
    }
    if (p == "prop") {
        if (witness.agents.size() != 1) {
            return false;
        }
        const AgentId i = witness.agents[0];
        return first_dominance_violation(assignment.row(i), baseline_allocation(priority, i, instance),
                                         instance.order(i)) == witness.prefix;
    }
    if (p == "lef") {
        if (lottery == nullptr || witness.agents.size() != 2 || !witness.required || !witness.achieved) {
            return false;
        }
        const AgentId i = witness.agents[0], j = witness.agents[1];
        const Rational required = priority.prob_before(i, j);
        const Rational achieved = likelihood_preferred(*lottery, i, j, instance);
        return required == *witness.required && achieved == *witness.achieved && achieved < required;
    }
    if (p == "1lef") {
        if (witness.agents.size() != 2) {
            return false;
        }
        const AgentId i = witness.agents[0], j = witness.agents[1];
        if (priority.prob_before(i, j) != 1) {
            return false;
        }
        if (witness.assignment) {
            if (lottery == nullptr) {
                return false;
            }
            for (const auto& [f, weight] : lottery->entries()) {
                if (std::equal(f.items().begin(), f.items().end(), witness.assignment->begin(),
                               witness.assignment->end())) {
                    return !instance.prefers(i, f[i], f[j]);
                }
            }
            return false;
        }
        if (witness.items.size() != 2) {
            return false;
        }
        const ItemId a = witness.items[0], b = witness.items[1];
        return instance.prefers(i, a, b) && assignment.at(i, b) > 0 && assignment.at(j, a) > 0;
    }
    if (p == "oe") {
        if (!witness.dominating || !is_valid_assignment(*witness.dominating)) {
            return false;
        }
        return !(*witness.dominating == assignment.matrix()) && dominates_all(*witness.dominating, assignment, instance);
    }
    return false;
}

Json report_to_json(const AuditReport& report, const Instance& instance) {
    Json witnesses = Json::array();
    for (const auto& w : report.witnesses) {
        Json entry = Json::object();
        if (!w.agents.empty()) {
            Json agents = Json::array();
            for (AgentId a : w.agents) {
                agents.push_back(instance.agents()[a]);
            }
            entry["agents"] = agents;
        }
        if (!w.items.empty()) {
            Json items = Json::array();
            for (ItemId j : w.items) {
                items.push_back(instance.items()[j]);
            }
            entry[report.property == "oe" ? "cycle" : "items"] = items;
        }
        if (w.prefix) {
            entry["prefix"] = *w.prefix;
        }
        if (w.required) {
            entry["required"] = rational_json(*w.required);
        }
        if (w.achieved) {
            entry["achieved"] = rational_json(*w.achieved);
        }
        if (w.assignment) {
            Json f = Json::object();
            for (std::size_t i = 0; i < w.assignment->size(); ++i) {
                f[instance.agents()[i]] = instance.items()[(*w.assignment)[i]];
            }
            entry["assignment"] = f;
        }
        if (w.dominating) {
            entry["dominating"] = assignment_to_json(instance, RandomAssignment(*w.dominating)).at("matrix");
        }
        witnesses.push_back(std::move(entry));
    }
    return Json{{"property", report.property}, {"verdict", report.pass ? "pass" : "fail"}, {"witnesses", witnesses}};
}

}  // namespace fairassign
