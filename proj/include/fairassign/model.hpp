#pragma once

#include "fairassign/rational.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace fairassign {

// Agents and items are dense 0-based indices. Names are only used at the
// serialization boundary.
using AgentId = int;
using ItemId = int;

/// Agents with strict preferences over items, m >= n.
///
/// Constructing with fewer items than agents appends dummy items named
/// `__dummy_1`, `__dummy_2`, ... which every agent ranks last, in item-index
/// order.
class Instance {
public:
    Instance(std::vector<std::string> agents, std::vector<std::string> items,
             std::vector<std::vector<ItemId>> preference_orders);

    /// Anonymous instance with agents "1".."n" and items "i1".."im".
    static Instance from_orders(std::vector<std::vector<ItemId>> preference_orders, int item_count);

    int agent_count() const { return static_cast<int>(agents_.size()); }
    int item_count() const { return static_cast<int>(items_.size()); }

    const std::vector<std::string>& agents() const { return agents_; }
    const std::vector<std::string>& items() const { return items_; }

    /// Items from most to least preferred.
    std::span<const ItemId> order(AgentId agent) const { return orders_[agent]; }

    /// 0-based rank of `item` for `agent` (0 = favourite).
    int rank(AgentId agent, ItemId item) const { return ranks_[agent][item]; }

    bool prefers(AgentId agent, ItemId a, ItemId b) const { return ranks_[agent][a] < ranks_[agent][b]; }

    int dummy_count() const { return dummy_count_; }

    bool operator==(const Instance&) const = default;

private:
    std::vector<std::string> agents_;
    std::vector<std::string> items_;
    std::vector<std::vector<ItemId>> orders_;
    std::vector<std::vector<int>> ranks_;
    int dummy_count_ = 0;
};

/// A total order over agents. position(i) == 0 is the highest priority.
class SimplePriority {
public:
    /// `order` lists agents from highest to lowest priority.
    explicit SimplePriority(std::vector<AgentId> order);

    static SimplePriority identity(int agent_count);

    int size() const { return static_cast<int>(order_.size()); }
    std::span<const AgentId> order() const { return order_; }
    int position(AgentId agent) const { return positions_[agent]; }
    bool before(AgentId i, AgentId j) const { return positions_[i] < positions_[j]; }

    bool operator==(const SimplePriority& other) const { return order_ == other.order_; }
    bool operator<(const SimplePriority& other) const { return order_ < other.order_; }

private:
    std::vector<AgentId> order_;
    std::vector<int> positions_;
};

/// Probability distribution over simple priorities. Weights are positive and
/// sum to exactly one; duplicate orders are merged on construction, keeping
/// the position of the first occurrence.
class RandomPriority {
public:
    using Entry = std::pair<SimplePriority, Rational>;

    explicit RandomPriority(std::vector<Entry> entries);

    static RandomPriority deterministic(SimplePriority priority);

    int agent_count() const { return agent_count_; }
    const std::vector<Entry>& entries() const { return entries_; }

    /// Pr[sigma(i) < sigma(j)].
    Rational prob_before(AgentId i, AgentId j) const;

    bool operator==(const RandomPriority&) const = default;

private:
    std::vector<Entry> entries_;
    int agent_count_ = 0;
};

/// probs[r] = probability the agent holds position r (0-based).
using RankDistribution = std::vector<Rational>;

RankDistribution rank_distribution(const RandomPriority& priority, AgentId agent);

/// All agents' rank distributions, row i = S_i.
Matrix rank_table(const RandomPriority& priority);

/// Exact n x m assignment matrix. Rows sum to one, columns to at most one
/// (exactly one when n == m), entries lie in [0, 1].
class RandomAssignment {
public:
    explicit RandomAssignment(Matrix p);

    int agent_count() const { return static_cast<int>(p_.size()); }
    int item_count() const { return p_.empty() ? 0 : static_cast<int>(p_.front().size()); }

    const Matrix& matrix() const { return p_; }
    const std::vector<Rational>& row(AgentId agent) const { return p_[agent]; }
    const Rational& at(AgentId agent, ItemId item) const { return p_[agent][item]; }

    Rational column_sum(ItemId item) const;

    bool operator==(const RandomAssignment&) const = default;

private:
    Matrix p_;
};

/// Injective map agents -> items over `item_count` items.
class SimpleAssignment {
public:
    SimpleAssignment(std::vector<ItemId> items, int item_count);

    int agent_count() const { return static_cast<int>(items_.size()); }
    int item_count() const { return item_count_; }
    ItemId operator[](AgentId agent) const { return items_[agent]; }
    std::span<const ItemId> items() const { return items_; }

    bool operator==(const SimpleAssignment&) const = default;
    auto operator<=>(const SimpleAssignment&) const = default;

private:
    std::vector<ItemId> items_;
    int item_count_ = 0;
};

/// Probability distribution over simple assignments of a common shape.
class Lottery {
public:
    using Entry = std::pair<SimpleAssignment, Rational>;

    explicit Lottery(std::vector<Entry> entries);

    int agent_count() const { return entries_.front().first.agent_count(); }
    int item_count() const { return entries_.front().first.item_count(); }
    const std::vector<Entry>& entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }

    bool operator==(const Lottery&) const = default;

private:
    std::vector<Entry> entries_;
};

RandomAssignment assignment_from_lottery(const Lottery& lottery);

/// Checks that `priority` and `assignment` (when given) have the instance's
/// shape. Throws InputError naming the mismatch.
void require_consistent(const Instance& instance, const RandomPriority& priority);
void require_consistent(const Instance& instance, const RandomAssignment& assignment);

}  // namespace fairassign
