#include "support.hpp"

#include "fairassign/audit.hpp"
#include "fairassign/eating.hpp"
#include "fairassign/error.hpp"
#include "fairassign/lefsolve.hpp"
#include "fairassign/lottery.hpp"

#include <doctest.h>

#include <functional>
#include <numeric>

using namespace fairassign;
using namespace testing_support;

namespace {

const Rational half(1, 2);

void check_result(const LefResult& result, const RandomAssignment& p, const RandomPriority& sigma,
                  const Instance& inst) {
    if (result.feasible) {
        REQUIRE(result.witness.has_value());
        CHECK(assignment_from_lottery(*result.witness) == p);
        CHECK(check_lef_lottery(*result.witness, sigma, inst).pass);
    } else {
        CHECK(!result.witness.has_value());
        CHECK(!result.certificate.empty());
        CHECK(!result.note.empty());
    }
}

// Every weight vector over `count` outcomes with entries k/denominator.
void compositions(int count, int remaining, std::vector<int>& current, const std::function<void()>& visit) {
    if (static_cast<int>(current.size()) == count - 1) {
        current.push_back(remaining);
        visit();
        current.pop_back();
        return;
    }
    for (int k = 0; k <= remaining; ++k) {
        current.push_back(k);
        compositions(count, remaining - k, current, visit);
        current.pop_back();
    }
}

}  // namespace

TEST_CASE("support enumeration") {
    const auto ab = Instance::from_orders({{0, 1}, {0, 1}}, 2);
    CHECK(enumerate_support_assignments(RandomAssignment({{1, 0}, {0, 1}}), ab).size() == 1);
    const auto two = enumerate_support_assignments(RandomAssignment({{half, half}, {half, half}}), ab);
    REQUIRE(two.size() == 2);
    CHECK(two[0] == SimpleAssignment({0, 1}, 2));
    CHECK(two[1] == SimpleAssignment({1, 0}, 2));

    auto [inst, sigma] = load_fixture("thm1.json");
    CHECK(enumerate_support_assignments(cycle_elimination(inst, sigma), inst).size() == 2);

    const int n = kLefAgentLimit + 1;
    std::vector<ItemId> identity(n);
    std::iota(identity.begin(), identity.end(), 0);
    std::vector<std::vector<ItemId>> orders(n, identity);
    const Instance big = Instance::from_orders(orders, n);
    Matrix uniform(n, std::vector<Rational>(n, Rational(1, n)));
    CHECK_THROWS_AS(enumerate_support_assignments(RandomAssignment(uniform), big), SizeGuardError);
    CHECK_THROWS_AS(lef_feasible(RandomAssignment(uniform), RandomPriority::deterministic(SimplePriority::identity(n)),
                                 big),
                    SizeGuardError);
}

TEST_CASE("program rows") {
    const auto ab = Instance::from_orders({{0, 1}, {0, 1}}, 2);
    const auto det = RandomPriority::deterministic(SimplePriority({0, 1}));
    const auto program = build_lef_program(RandomAssignment({{half, half}, {half, half}}), det, ab);
    CHECK(program.support.size() == 2);
    CHECK(program.row_labels.size() == program.program.constraints.size());
    CHECK(program.program.variable_count == 2);
}

TEST_CASE("assignments induced by RSD are LEF-feasible") {
    for (const auto* name : {"thm1.json", "five_agent.json", "rsd_inefficiency.json", "two_agent.json"}) {
        auto [inst, sigma] = load_fixture(name);
        const auto p = assignment_from_lottery(rsd(inst, sigma));
        const auto result = lef_feasible(p, sigma, inst);
        CHECK(result.feasible);
        check_result(result, p, sigma, inst);
    }
    std::mt19937_64 rng(15);
    for (int trial = 0; trial < 60; ++trial) {
        const int n = uniform_int(rng, 1, 5);
        const int m = n + uniform_int(rng, 0, 1);
        const auto inst = clustered_instance(rng, n, m);
        const auto sigma = random_priority(rng, n, uniform_int(rng, 1, 4));
        const auto p = assignment_from_lottery(rsd(inst, sigma));
        const auto result = lef_feasible(p, sigma, inst);
        CHECK(result.feasible);
        check_result(result, p, sigma, inst);
    }
}

TEST_CASE("eating outputs that no lottery can implement") {
    auto [inst, sigma] = load_fixture("thm1.json");
    const auto ce = lef_feasible(cycle_elimination(inst, sigma), sigma, inst);
    CHECK(!ce.feasible);
    check_result(ce, cycle_elimination(inst, sigma), sigma, inst);
    const auto program = build_lef_program(cycle_elimination(inst, sigma), sigma, inst);
    std::vector<Rational> multipliers(program.row_labels.size(), Rational(0));
    for (const auto& [label, value] : ce.certificate) {
        const auto at = std::find(program.row_labels.begin(), program.row_labels.end(), label);
        REQUIRE(at != program.row_labels.end());
        multipliers[at - program.row_labels.begin()] = value;
    }
    CHECK(verify_farkas(program.program, multipliers));

    auto [inst2, sigma2] = load_fixture("five_agent.json");
    const auto ute = unit_time_eating(inst2, sigma2);
    const auto result = lef_feasible(ute, sigma2, inst2);
    CHECK(!result.feasible);
    check_result(result, ute, sigma2, inst2);
}

TEST_CASE("two-agent verdict matches the unique decomposition") {
    // With two agents and two items the inducing lottery is unique.
    std::mt19937_64 rng(26);
    for (int trial = 0; trial < 100; ++trial) {
        const auto inst = random_instance(rng, 2, 2);
        const auto sigma = random_priority(rng, 2, uniform_int(rng, 1, 2));
        const auto p = random_assignment(rng, 2, 2, uniform_int(rng, 1, 2));
        const auto result = lef_feasible(p, sigma, inst);
        CHECK(result.feasible == check_lef_lottery(bvn_decompose(p), sigma, inst).pass);
        check_result(result, p, sigma, inst);
    }
}

TEST_CASE("verdict agrees with a grid search over lotteries on three agents") {
    const int denominator = 12;
    std::vector<SimpleAssignment> perms;
    std::vector<ItemId> perm{0, 1, 2};
    do {
        perms.push_back(SimpleAssignment(perm, 3));
    } while (std::next_permutation(perm.begin(), perm.end()));

    std::vector<Lottery> grid;
    std::vector<int> weights;
    compositions(6, denominator, weights, [&] {
        std::vector<Lottery::Entry> entries;
        for (int k = 0; k < 6; ++k) {
            if (weights[k] > 0) {
                entries.emplace_back(perms[k], Rational(weights[k], denominator));
            }
        }
        grid.emplace_back(entries);
    });

    std::mt19937_64 rng(52);
    int feasible = 0, infeasible = 0;
    for (int trial = 0; trial < 40; ++trial) {
        const auto inst = trial % 2 ? random_instance(rng, 3, 3) : clustered_instance(rng, 3, 3);
        // Half the draws come from RSD under the uniform priority, whose
        // lottery has weights in sixths and so lies on the grid.
        const bool from_rsd = trial % 4 < 2;
        const auto sigma = from_rsd ? uniform_priority(3) : random_priority(rng, 3, uniform_int(rng, 1, 3));
        const auto p = from_rsd ? assignment_from_lottery(rsd(inst, sigma))
                                : assignment_from_lottery(grid[uniform_int(rng, 0, static_cast<int>(grid.size()) - 1)]);
        bool found = false;
        for (const auto& lottery : grid) {
            if (assignment_from_lottery(lottery) == p && check_lef_lottery(lottery, sigma, inst).pass) {
                found = true;
                break;
            }
        }
        const auto result = lef_feasible(p, sigma, inst);
        check_result(result, p, sigma, inst);
        if (found) {
            CHECK(result.feasible);
        }
        if (from_rsd) {
            CHECK(found);
        }
        feasible += result.feasible;
        infeasible += !result.feasible;
    }
    CHECK(feasible > 0);
    CHECK(infeasible > 0);
}
