#include "fairassign/lottery.hpp"

#include "fairassign/error.hpp"

namespace fairassign {

SimpleAssignment serial_dictatorship(const SimplePriority& priority, const Instance& instance) {
    if (priority.size() != instance.agent_count()) {
        throw InputError("priority and instance disagree on the agent count");
    }
    const int m = instance.item_count();
    std::vector<char> taken(m, 0);
    std::vector<ItemId> items(instance.agent_count(), -1);
    for (AgentId agent : priority.order()) {
        for (ItemId item : instance.order(agent)) {
            if (!taken[item]) {
                taken[item] = 1;
                items[agent] = item;
                break;
            }
        }
    }
    return SimpleAssignment(std::move(items), m);
}

Lottery rsd(const Instance& instance, const RandomPriority& priority) {
    require_consistent(instance, priority);
    std::vector<Lottery::Entry> entries;
    entries.reserve(priority.entries().size());
    for (const auto& [sigma, weight] : priority.entries()) {
        entries.emplace_back(serial_dictatorship(sigma, instance), weight);
    }
    return Lottery(std::move(entries));
}

namespace {

bool augment(int row, const std::vector<std::vector<char>>& support, std::vector<int>& row_of_column,
             std::vector<char>& visited) {
    const int size = static_cast<int>(support.size());
    for (int c = 0; c < size; ++c) {
        if (!support[row][c] || visited[c]) {
            continue;
        }
        visited[c] = 1;
        if (row_of_column[c] == -1 || augment(row_of_column[c], support, row_of_column, visited)) {
            row_of_column[c] = row;
            return true;
        }
    }
    return false;
}

}  // namespace

std::optional<std::vector<int>> perfect_matching(const std::vector<std::vector<char>>& support) {
    const int size = static_cast<int>(support.size());
    std::vector<int> row_of_column(size, -1);
    for (int r = 0; r < size; ++r) {
        std::vector<char> visited(size, 0);
        if (!augment(r, support, row_of_column, visited)) {
            return std::nullopt;
        }
    }
    std::vector<int> column_of_row(size, -1);
    for (int c = 0; c < size; ++c) {
        column_of_row[row_of_column[c]] = c;
    }
    return column_of_row;
}

Lottery bvn_decompose(const RandomAssignment& assignment) {
    const int n = assignment.agent_count();
    const int m = assignment.item_count();
    Matrix residual = assignment.matrix();

    // Spread each column's missing mass over the dummy rows.
    std::vector<Rational> deficit(m);
    for (int j = 0; j < m; ++j) {
        deficit[j] = 1 - assignment.column_sum(j);
    }
    int column = 0;
    for (int r = n; r < m; ++r) {
        std::vector<Rational> row(m, Rational(0));
        Rational need = 1;
        while (need > 0) {
            while (column < m && deficit[column] == 0) {
                ++column;
            }
            if (column == m) {
                throw InputError("assignment cannot be padded to a doubly stochastic matrix");
            }
            const Rational take = need < deficit[column] ? need : deficit[column];
            row[column] += take;
            deficit[column] -= take;
            need -= take;
        }
        residual.push_back(std::move(row));
    }

    std::vector<Lottery::Entry> entries;
    std::vector<std::vector<char>> support(m, std::vector<char>(m, 0));
    while (true) {
        bool any = false;
        for (int r = 0; r < m; ++r) {
            for (int c = 0; c < m; ++c) {
                support[r][c] = residual[r][c] > 0;
                any = any || support[r][c];
            }
        }
        if (!any) {
            break;
        }
        const auto matching = perfect_matching(support);
        if (!matching) {
            throw InputError("residual matrix has no perfect matching; input is not a valid assignment");
        }
        Rational weight = residual[0][(*matching)[0]];
        for (int r = 1; r < m; ++r) {
            if (residual[r][(*matching)[r]] < weight) {
                weight = residual[r][(*matching)[r]];
            }
        }
        for (int r = 0; r < m; ++r) {
            residual[r][(*matching)[r]] -= weight;
        }
        std::vector<ItemId> items(matching->begin(), matching->begin() + n);
        entries.emplace_back(SimpleAssignment(std::move(items), m), weight);
    }
    return Lottery(std::move(entries));
}

}  // namespace fairassign
