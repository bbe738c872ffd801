#include "support.hpp"

#include "fairassign/error.hpp"
#include "fairassign/json_io.hpp"
#include "fairassign/model.hpp"

#include <doctest.h>

using namespace fairassign;
using namespace testing_support;

namespace {

Rational q(const char* text) { return parse_rational(text); }

const char* kMinimal = R"({
  "agents": ["1", "2"],
  "items": ["a", "b"],
  "preferences": {"1": ["a", "b"], "2": ["a", "b"]},
  "priority": [{"order": ["1", "2"], "weight": "1/1"}]
})";

}  // namespace

TEST_CASE("rationals parse and print exactly") {
    CHECK(parse_rational("3/6") == Rational(1, 2));
    CHECK(parse_rational("-4") == -4);
    CHECK_THROWS_AS(parse_rational(" 2/3 "), InputError);
    CHECK(format_rational(Rational(0)) == "0/1");
    CHECK(format_rational(Rational(1)) == "1/1");
    CHECK(format_rational(q("6/8")) == "3/4");
    CHECK_THROWS_AS(parse_rational("1/0"), InputError);
    CHECK_THROWS_AS(parse_rational("abc"), InputError);
    CHECK_THROWS_AS(parse_rational("1/2/3"), InputError);
    CHECK_THROWS_AS(parse_rational(""), InputError);
}

TEST_CASE("minimal instance loads") {
    auto [inst, sigma] = load_instance_text(kMinimal);
    CHECK(inst.agent_count() == 2);
    CHECK(inst.item_count() == 2);
    CHECK(inst.prefers(0, 0, 1));
    CHECK(sigma.entries().size() == 1);
    CHECK(sigma.prob_before(0, 1) == 1);
}

TEST_CASE("thm1 fixture parses with the stated preferences and priority") {
    auto [inst, sigma] = load_fixture("thm1.json");
    CHECK(inst.agents() == std::vector<std::string>{"1", "2", "3", "4"});
    CHECK(inst.items() == std::vector<std::string>{"a", "b", "c", "d"});
    CHECK(std::vector<ItemId>(inst.order(0).begin(), inst.order(0).end()) == std::vector<ItemId>{0, 1, 2, 3});
    CHECK(std::vector<ItemId>(inst.order(1).begin(), inst.order(1).end()) == std::vector<ItemId>{1, 0, 2, 3});
    REQUIRE(sigma.entries().size() == 2);
    CHECK(sigma.entries()[0].first == SimplePriority({3, 1, 2, 0}));
    CHECK(sigma.entries()[1].first == SimplePriority({2, 0, 3, 1}));
    CHECK(sigma.entries()[0].second == Rational(1, 2));
}

TEST_CASE("fewer items than agents appends dummies ranked last") {
    auto [inst, sigma] = load_instance_text(R"({
      "agents": ["x", "y", "z"], "items": ["a", "b"],
      "preferences": {"x": ["a", "b"], "y": ["b", "a"], "z": ["a", "b"]},
      "priority": [{"order": ["x", "y", "z"], "weight": "1"}]})");
    CHECK(inst.item_count() == 3);
    CHECK(inst.dummy_count() == 1);
    CHECK(inst.items()[2] == "__dummy_1");
    for (int i = 0; i < 3; ++i) {
        CHECK(inst.order(i).back() == 2);
    }
    const Json back = instance_to_json(inst, sigma);
    CHECK(back.at("items").size() == 2);
    auto [again, sigma2] = load_instance(back);
    CHECK(again == inst);
    CHECK(sigma2 == sigma);
}

TEST_CASE("loader rejects malformed documents") {
    auto bad = [](const std::string& text) { CHECK_THROWS_AS(load_instance_text(text), InputError); };
    bad("{");
    bad(R"({"agents": ["1","1"], "items": ["a","b"], "preferences": {"1": ["a","b"]},
            "priority": [{"order": ["1","1"], "weight": "1"}]})");
    bad(R"({"agents": ["1","2"], "items": ["a","b"], "preferences": {"1": ["a","a"], "2": ["a","b"]},
            "priority": [{"order": ["1","2"], "weight": "1"}]})");
    bad(R"({"agents": ["1","2"], "items": ["a","b"], "preferences": {"1": ["a","b"], "2": ["a","b"]},
            "priority": [{"order": ["1","2"], "weight": "1/2"}]})");
    bad(R"({"agents": ["1","2"], "items": ["a","b"], "preferences": {"1": ["a","b"], "2": ["a","b"]},
            "priority": [{"order": ["1","3"], "weight": "1"}]})");
    bad(R"({"agents": ["1","2"], "items": ["a","b"], "preferences": {"1": ["a","b"]},
            "priority": [{"order": ["1","2"], "weight": "1"}]})");
    bad(R"({"agents": ["1","2"], "items": ["a","b"], "preferences": {"1": ["a","b"], "2": ["a","b"]},
            "priority": [{"order": ["1","2"], "weight": "0"}, {"order": ["2","1"], "weight": "1"}]})");
    bad(R"({"agents": ["1","2"], "items": ["a","b"], "preferences": {"1": ["a","b"], "2": ["a","b"]},
            "priority": [{"order": ["1","2"], "weight": "x"}]})");
}

TEST_CASE("loading is deterministic") {
    auto first = load_fixture("five_agent.json");
    auto second = load_fixture("five_agent.json");
    CHECK(first.first == second.first);
    CHECK(first.second == second.second);
}

TEST_CASE("rank distributions") {
    auto [inst, sigma] = load_fixture("thm1.json");
    CHECK(rank_distribution(sigma, 0) == std::vector<Rational>{0, q("1/2"), 0, q("1/2")});
    CHECK(rank_distribution(sigma, 2) == std::vector<Rational>{q("1/2"), 0, q("1/2"), 0});
    const auto point = RandomPriority::deterministic(SimplePriority({1, 3, 0, 2, 4}));
    CHECK(rank_distribution(point, 0) == std::vector<Rational>{0, 0, 1, 0, 0});

    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = uniform_int(rng, 1, 7);
        const auto table = rank_table(random_priority(rng, n, uniform_int(rng, 1, 5)));
        for (const auto& row : table) {
            CHECK(sum(row) == 1);
        }
        for (int r = 0; r < n; ++r) {
            Rational column = 0;
            for (const auto& row : table) {
                column += row[r];
            }
            CHECK(column == 1);
        }
    }
}

TEST_CASE("random priority merges duplicates and keeps first-seen order") {
    RandomPriority sigma({{SimplePriority({1, 0}), q("1/4")},
                          {SimplePriority({0, 1}), q("1/4")},
                          {SimplePriority({1, 0}), q("1/2")}});
    REQUIRE(sigma.entries().size() == 2);
    CHECK(sigma.entries()[0].first == SimplePriority({1, 0}));
    CHECK(sigma.entries()[0].second == q("3/4"));
    CHECK(sigma.prob_before(0, 1) == q("1/4"));
    CHECK_THROWS_AS(RandomPriority({{SimplePriority({0, 1}), q("1/3")}}), InputError);
    CHECK_THROWS_AS(SimplePriority({0, 0}), InputError);
}

TEST_CASE("assignment invariants") {
    CHECK_NOTHROW(RandomAssignment({{q("1/2"), q("1/2")}, {q("1/2"), q("1/2")}}));
    CHECK_THROWS_AS(RandomAssignment({{q("1/2"), q("1/4")}, {q("1/2"), q("3/4")}}), InputError);
    CHECK_THROWS_AS(RandomAssignment({{1, 0}, {1, 0}}), InputError);
    CHECK_THROWS_AS(RandomAssignment({{q("3/2"), q("-1/2")}, {0, 1}}), InputError);
    CHECK_THROWS_AS(RandomAssignment({{1}, {1}}), InputError);
    CHECK_NOTHROW(RandomAssignment({{q("1/2"), q("1/2"), 0}, {0, q("1/2"), q("1/2")}}));
    CHECK_THROWS_AS(SimpleAssignment({0, 0}, 2), InputError);
}

TEST_CASE("assignment from lottery") {
    const Lottery single({{SimpleAssignment({1, 0, 2}, 3), Rational(1)}});
    CHECK(assignment_from_lottery(single).matrix() == Matrix{{0, 1, 0}, {1, 0, 0}, {0, 0, 1}});

    std::vector<ItemId> f1{0, 99}, f2{99, 98};
    const Lottery example({{SimpleAssignment(f1, 100), q("1/2")}, {SimpleAssignment(f2, 100), q("1/2")}});
    const auto p = assignment_from_lottery(example);
    CHECK(p.at(0, 0) == q("1/2"));
    CHECK(p.at(0, 99) == q("1/2"));
    CHECK(p.at(1, 98) == q("1/2"));
    CHECK(p.at(1, 99) == q("1/2"));
    CHECK(sum(p.row(0)) == 1);

    // Two different decompositions of the uniform 2x2 matrix.
    const Lottery swap({{SimpleAssignment({0, 1}, 2), q("1/2")}, {SimpleAssignment({1, 0}, 2), q("1/2")}});
    const Lottery skewed({{SimpleAssignment({1, 0}, 2), q("1/2")}, {SimpleAssignment({0, 1}, 2), q("1/2")}});
    CHECK(!(swap == skewed));
    CHECK(assignment_from_lottery(swap) == assignment_from_lottery(skewed));
}

TEST_CASE("assignment and lottery JSON round trip") {
    std::mt19937_64 rng(5);
    auto inst = random_instance(rng, 3, 4);
    auto p = random_assignment(rng, 3, 4, 3);
    const Json doc = assignment_to_json(inst, p);
    CHECK(assignment_from_json(inst, doc) == p);
    CHECK(doc.at("matrix").at("1").size() == 4);

    const Lottery lottery({{SimpleAssignment({0, 1, 2}, 4), q("1/3")}, {SimpleAssignment({3, 2, 1}, 4), q("2/3")}});
    CHECK(lottery_from_json(inst, lottery_to_json(inst, lottery)) == lottery);

    Json sparse = Json::parse(R"({"matrix": {"1": {"i1": "1"}, "2": {"i2": "1/1"}, "3": {"i3": "1"}}})");
    CHECK(assignment_from_json(inst, sparse).at(0, 0) == 1);
    Json unknown = Json::parse(R"({"matrix": {"1": {"zz": "1"}, "2": {"i2": "1"}, "3": {"i3": "1"}}})");
    CHECK_THROWS_AS(assignment_from_json(inst, unknown), InputError);
}

TEST_CASE("consistency checks") {
    auto [inst, sigma] = load_fixture("thm1.json");
    CHECK_THROWS_AS(require_consistent(inst, RandomPriority::deterministic(SimplePriority::identity(3))), InputError);
    CHECK_THROWS_AS(require_consistent(inst, RandomAssignment({{1, 0}, {0, 1}})), InputError);
}
