#include "fairassign/model.hpp"

#include "fairassign/error.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace fairassign {

namespace {

bool is_permutation_of_range(std::span<const int> values, int size) {
    if (static_cast<int>(values.size()) != size) {
        return false;
    }
    std::vector<char> seen(size, 0);
    for (int v : values) {
        if (v < 0 || v >= size || seen[v]) {
            return false;
        }
        seen[v] = 1;
    }
    return true;
}

void require_unique(const std::vector<std::string>& names, const char* what) {
    std::set<std::string> seen;
    for (const auto& name : names) {
        if (!seen.insert(name).second) {
            throw InputError(std::string("duplicate ") + what + " identifier '" + name + "'");
        }
    }
}

}  // namespace

Instance::Instance(std::vector<std::string> agents, std::vector<std::string> items,
                   std::vector<std::vector<ItemId>> preference_orders)
    : agents_(std::move(agents)), items_(std::move(items)), orders_(std::move(preference_orders)) {
    require_unique(agents_, "agent");
    require_unique(items_, "item");
    if (orders_.size() != agents_.size()) {
        throw InputError("expected one preference order per agent");
    }
    const int real_items = static_cast<int>(items_.size());
    for (std::size_t i = 0; i < orders_.size(); ++i) {
        if (!is_permutation_of_range(orders_[i], real_items)) {
            throw InputError("preference of agent '" + agents_[i] + "' is not a bijection onto the items");
        }
    }
    while (items_.size() < agents_.size()) {
        ++dummy_count_;
        std::string name = "__dummy_" + std::to_string(dummy_count_);
        if (std::find(items_.begin(), items_.end(), name) != items_.end()) {
            throw InputError("item name '" + name + "' is reserved for dummy padding");
        }
        items_.push_back(std::move(name));
    }
    const int m = item_count();
    ranks_.assign(orders_.size(), std::vector<int>(m, 0));
    for (std::size_t i = 0; i < orders_.size(); ++i) {
        for (int j = real_items; j < m; ++j) {
            orders_[i].push_back(j);
        }
        for (int r = 0; r < m; ++r) {
            ranks_[i][orders_[i][r]] = r;
        }
    }
}

Instance Instance::from_orders(std::vector<std::vector<ItemId>> preference_orders, int item_count) {
    std::vector<std::string> agents;
    for (std::size_t i = 0; i < preference_orders.size(); ++i) {
        agents.push_back(std::to_string(i + 1));
    }
    std::vector<std::string> items;
    for (int j = 0; j < item_count; ++j) {
        items.push_back("i" + std::to_string(j + 1));
    }
    return Instance(std::move(agents), std::move(items), std::move(preference_orders));
}

SimplePriority::SimplePriority(std::vector<AgentId> order) : order_(std::move(order)) {
    if (!is_permutation_of_range(order_, static_cast<int>(order_.size()))) {
        throw InputError("priority order is not a permutation of the agents");
    }
    positions_.assign(order_.size(), 0);
    for (std::size_t r = 0; r < order_.size(); ++r) {
        positions_[order_[r]] = static_cast<int>(r);
    }
}

SimplePriority SimplePriority::identity(int agent_count) {
    std::vector<AgentId> order(agent_count);
    for (int i = 0; i < agent_count; ++i) {
        order[i] = i;
    }
    return SimplePriority(std::move(order));
}

RandomPriority::RandomPriority(std::vector<Entry> entries) {
    if (entries.empty()) {
        throw InputError("random priority has no entries");
    }
    agent_count_ = entries.front().first.size();
    std::map<std::vector<AgentId>, std::size_t> index;
    Rational total = 0;
    for (auto& [priority, weight] : entries) {
        weight.canonicalize();
        if (priority.size() != agent_count_) {
            throw InputError("priority orders have differing agent counts");
        }
        if (weight <= 0) {
            throw InputError("priority weight " + format_rational(weight) + " is not positive");
        }
        total += weight;
        std::vector<AgentId> key(priority.order().begin(), priority.order().end());
        auto [it, inserted] = index.emplace(std::move(key), entries_.size());
        if (inserted) {
            entries_.emplace_back(std::move(priority), weight);
        } else {
            entries_[it->second].second += weight;
        }
    }
    if (total != 1) {
        throw InputError("priority weights sum to " + format_rational(total) + ", not 1");
    }
}

RandomPriority RandomPriority::deterministic(SimplePriority priority) {
    std::vector<Entry> entries;
    entries.emplace_back(std::move(priority), Rational(1));
    return RandomPriority(std::move(entries));
}

Rational RandomPriority::prob_before(AgentId i, AgentId j) const {
    Rational p = 0;
    for (const auto& [priority, weight] : entries_) {
        if (priority.before(i, j)) {
            p += weight;
        }
    }
    return p;
}

RankDistribution rank_distribution(const RandomPriority& priority, AgentId agent) {
    RankDistribution probs(priority.agent_count(), Rational(0));
    for (const auto& [sigma, weight] : priority.entries()) {
        probs[sigma.position(agent)] += weight;
    }
    return probs;
}

Matrix rank_table(const RandomPriority& priority) {
    const int n = priority.agent_count();
    Matrix table(n, std::vector<Rational>(n, Rational(0)));
    for (const auto& [sigma, weight] : priority.entries()) {
        for (int i = 0; i < n; ++i) {
            table[i][sigma.position(i)] += weight;
        }
    }
    return table;
}

RandomAssignment::RandomAssignment(Matrix p) : p_(std::move(p)) {
    if (p_.empty()) {
        throw InputError("assignment has no agents");
    }
    const std::size_t m = p_.front().size();
    if (m < p_.size()) {
        throw InputError("assignment has fewer items than agents");
    }
    for (std::size_t i = 0; i < p_.size(); ++i) {
        if (p_[i].size() != m) {
            throw InputError("assignment rows have differing lengths");
        }
        Rational row_total = 0;
        for (auto& v : p_[i]) {
            v.canonicalize();
            if (v < 0 || v > 1) {
                throw InputError("assignment entry " + format_rational(v) + " lies outside [0,1]");
            }
            row_total += v;
        }
        if (row_total != 1) {
            throw InputError("assignment row " + std::to_string(i) + " sums to " + format_rational(row_total) +
                             ", not 1");
        }
    }
    for (std::size_t j = 0; j < m; ++j) {
        const Rational total = column_sum(static_cast<ItemId>(j));
        if (total > 1) {
            throw InputError("assignment column " + std::to_string(j) + " sums to " + format_rational(total) +
                             ", more than 1");
        }
    }
}

Rational RandomAssignment::column_sum(ItemId item) const {
    Rational total = 0;
    for (const auto& row : p_) {
        total += row[item];
    }
    return total;
}

SimpleAssignment::SimpleAssignment(std::vector<ItemId> items, int item_count)
    : items_(std::move(items)), item_count_(item_count) {
    std::vector<char> used(std::max(item_count, 0), 0);
    for (ItemId item : items_) {
        if (item < 0 || item >= item_count) {
            throw InputError("simple assignment uses an unknown item");
        }
        if (used[item]) {
            throw InputError("simple assignment gives one item to two agents");
        }
        used[item] = 1;
    }
}

Lottery::Lottery(std::vector<Entry> entries) {
    if (entries.empty()) {
        throw InputError("lottery has no entries");
    }
    const int n = entries.front().first.agent_count();
    const int m = entries.front().first.item_count();
    std::map<std::vector<ItemId>, std::size_t> index;
    Rational total = 0;
    for (auto& [assignment, weight] : entries) {
        weight.canonicalize();
        if (assignment.agent_count() != n || assignment.item_count() != m) {
            throw InputError("lottery assignments have differing shapes");
        }
        if (weight <= 0) {
            throw InputError("lottery weight " + format_rational(weight) + " is not positive");
        }
        total += weight;
        std::vector<ItemId> key(assignment.items().begin(), assignment.items().end());
        auto [it, inserted] = index.emplace(std::move(key), entries_.size());
        if (inserted) {
            entries_.emplace_back(std::move(assignment), weight);
        } else {
            entries_[it->second].second += weight;
        }
    }
    if (total != 1) {
        throw InputError("lottery weights sum to " + format_rational(total) + ", not 1");
    }
}

RandomAssignment assignment_from_lottery(const Lottery& lottery) {
    Matrix p(lottery.agent_count(), std::vector<Rational>(lottery.item_count(), Rational(0)));
    for (const auto& [f, weight] : lottery.entries()) {
        for (int i = 0; i < f.agent_count(); ++i) {
            p[i][f[i]] += weight;
        }
    }
    return RandomAssignment(std::move(p));
}

void require_consistent(const Instance& instance, const RandomPriority& priority) {
    if (priority.agent_count() != instance.agent_count()) {
        throw InputError("priority covers " + std::to_string(priority.agent_count()) + " agents but the instance has " +
                         std::to_string(instance.agent_count()));
    }
}

void require_consistent(const Instance& instance, const RandomAssignment& assignment) {
    if (assignment.agent_count() != instance.agent_count() || assignment.item_count() != instance.item_count()) {
        throw InputError("assignment is " + std::to_string(assignment.agent_count()) + "x" +
                         std::to_string(assignment.item_count()) + " but the instance is " +
                         std::to_string(instance.agent_count()) + "x" + std::to_string(instance.item_count()));
    }
}

}  // namespace fairassign
