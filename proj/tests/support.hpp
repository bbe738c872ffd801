#pragma once

#include "fairassign/json_io.hpp"
#include "fairassign/model.hpp"

#include <algorithm>
#include <filesystem>
#include <numeric>
#include <random>
#include <string>
#include <vector>

namespace testing_support {

using namespace fairassign;

inline std::filesystem::path fixture(const std::string& name) {
    return std::filesystem::path(FAIRASSIGN_FIXTURE_DIR) / name;
}

inline std::pair<Instance, RandomPriority> load_fixture(const std::string& name) {
    return load_instance_file(fixture(name));
}

inline int uniform_int(std::mt19937_64& rng, int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline std::vector<int> random_permutation(std::mt19937_64& rng, int size) {
    std::vector<int> p(size);
    std::iota(p.begin(), p.end(), 0);
    std::shuffle(p.begin(), p.end(), rng);
    return p;
}

inline Instance random_instance(std::mt19937_64& rng, int n, int m) {
    std::vector<std::vector<ItemId>> orders;
    for (int i = 0; i < n; ++i) {
        orders.push_back(random_permutation(rng, m));
    }
    return Instance::from_orders(std::move(orders), m);
}

// Instance whose preferences are drawn from a small pool so agents collide
// on favourites more often than with independent permutations.
inline Instance clustered_instance(std::mt19937_64& rng, int n, int m) {
    const int pool_size = uniform_int(rng, 1, 3);
    std::vector<std::vector<int>> pool;
    for (int k = 0; k < pool_size; ++k) {
        pool.push_back(random_permutation(rng, m));
    }
    std::vector<std::vector<ItemId>> orders;
    for (int i = 0; i < n; ++i) {
        orders.push_back(pool[uniform_int(rng, 0, pool_size - 1)]);
    }
    return Instance::from_orders(std::move(orders), m);
}

inline std::vector<Rational> random_weights(std::mt19937_64& rng, int count, int max_weight = 9) {
    std::vector<Rational> w;
    Rational total = 0;
    for (int k = 0; k < count; ++k) {
        w.emplace_back(uniform_int(rng, 1, max_weight));
        total += w.back();
    }
    for (auto& x : w) {
        x /= total;
    }
    return w;
}

inline RandomPriority random_priority(std::mt19937_64& rng, int n, int orders) {
    const auto weights = random_weights(rng, orders);
    std::vector<RandomPriority::Entry> entries;
    for (int k = 0; k < orders; ++k) {
        entries.emplace_back(SimplePriority(random_permutation(rng, n)), weights[k]);
    }
    return RandomPriority(std::move(entries));
}

inline RandomPriority uniform_priority(int n) {
    std::vector<AgentId> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::vector<std::vector<AgentId>> all;
    do {
        all.push_back(order);
    } while (std::next_permutation(order.begin(), order.end()));
    std::vector<RandomPriority::Entry> entries;
    for (auto& o : all) {
        entries.emplace_back(SimplePriority(o), Rational(1, static_cast<long>(all.size())));
    }
    return RandomPriority(std::move(entries));
}

// A convex combination of random injective maps, so always a valid
// assignment; `components` controls how fractional it is.
inline RandomAssignment random_assignment(std::mt19937_64& rng, int n, int m, int components, int max_weight = 9) {
    const auto weights = random_weights(rng, components, max_weight);
    Matrix p(n, std::vector<Rational>(m, Rational(0)));
    for (int k = 0; k < components; ++k) {
        const auto perm = random_permutation(rng, m);
        for (int i = 0; i < n; ++i) {
            p[i][perm[i]] += weights[k];
        }
    }
    return RandomAssignment(std::move(p));
}

}  // namespace testing_support
