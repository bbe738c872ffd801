#pragma once

#include "fairassign/model.hpp"

#include <json.hpp>

#include <filesystem>
#include <string_view>
#include <utility>

namespace fairassign {

using Json = nlohmann::ordered_json;

/// Instance document:
///   { "agents": [...], "items": [...],
///     "preferences": { "<agent>": [items, most preferred first] },
///     "priority": [ { "order": [agents, highest first], "weight": "num/den" } ] }
/// Rationals are parsed exactly. With fewer items than agents, dummy items are
/// appended as every agent's least-preferred tail.
std::pair<Instance, RandomPriority> load_instance(const Json& document);
std::pair<Instance, RandomPriority> load_instance_text(std::string_view text);
std::pair<Instance, RandomPriority> load_instance_file(const std::filesystem::path& path);

Json instance_to_json(const Instance& instance, const RandomPriority& priority);

/// { "matrix": { "<agent>": { "<item>": "num/den", ... } } }. Every item of
/// every agent is written; missing entries read back as 0.
Json assignment_to_json(const Instance& instance, const RandomAssignment& assignment);
RandomAssignment assignment_from_json(const Instance& instance, const Json& document);

/// [ { "assignment": { "<agent>": "<item>" }, "weight": "num/den" }, ... ]
Json lottery_to_json(const Instance& instance, const Lottery& lottery);
Lottery lottery_from_json(const Instance& instance, const Json& document);

Json read_json_file(const std::filesystem::path& path);

}  // namespace fairassign
