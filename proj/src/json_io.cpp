#include "fairassign/json_io.hpp"

#include "fairassign/error.hpp"

#include <fstream>
#include <map>
#include <sstream>

namespace fairassign {

namespace {

const Json& require_field(const Json& object, const char* key) {
    if (!object.is_object() || !object.contains(key)) {
        throw InputError(std::string("document is missing \"") + key + "\"");
    }
    return object.at(key);
}

std::vector<std::string> string_list(const Json& value, const char* what) {
    if (!value.is_array()) {
        throw InputError(std::string("\"") + what + "\" must be an array of strings");
    }
    std::vector<std::string> out;
    for (const auto& entry : value) {
        if (!entry.is_string()) {
            throw InputError(std::string("\"") + what + "\" must be an array of strings");
        }
        out.push_back(entry.get<std::string>());
    }
    return out;
}

std::map<std::string, int> index_of(const std::vector<std::string>& names) {
    std::map<std::string, int> index;
    for (std::size_t i = 0; i < names.size(); ++i) {
        index.emplace(names[i], static_cast<int>(i));
    }
    return index;
}

int lookup(const std::map<std::string, int>& index, const std::string& name, const char* what) {
    const auto it = index.find(name);
    if (it == index.end()) {
        throw InputError(std::string("unknown ") + what + " '" + name + "'");
    }
    return it->second;
}

Rational rational_field(const Json& value) {
    if (value.is_string()) {
        return parse_rational(value.get<std::string>());
    }
    if (value.is_number_integer()) {
        return Rational(value.get<long>());
    }
    throw InputError("rational values must be \"num/den\" strings");
}

}  // namespace

std::pair<Instance, RandomPriority> load_instance(const Json& document) {
    auto agents = string_list(require_field(document, "agents"), "agents");
    auto items = string_list(require_field(document, "items"), "items");
    const auto agent_index = index_of(agents);
    const auto item_index = index_of(items);

    const Json& prefs = require_field(document, "preferences");
    if (!prefs.is_object()) {
        throw InputError("\"preferences\" must be an object keyed by agent");
    }
    for (const auto& [name, _] : prefs.items()) {
        lookup(agent_index, name, "agent");
    }
    std::vector<std::vector<ItemId>> orders;
    for (const auto& agent : agents) {
        if (!prefs.contains(agent)) {
            throw InputError("agent '" + agent + "' has no preference list");
        }
        std::vector<ItemId> order;
        for (const auto& item : string_list(prefs.at(agent), "preferences")) {
            order.push_back(lookup(item_index, item, "item"));
        }
        orders.push_back(std::move(order));
    }

    const Json& priority_doc = require_field(document, "priority");
    if (!priority_doc.is_array()) {
        throw InputError("\"priority\" must be an array");
    }
    std::vector<RandomPriority::Entry> entries;
    for (const auto& entry : priority_doc) {
        std::vector<AgentId> order;
        for (const auto& agent : string_list(require_field(entry, "order"), "order")) {
            order.push_back(lookup(agent_index, agent, "agent"));
        }
        if (order.size() != agents.size()) {
            throw InputError("priority order does not list every agent exactly once");
        }
        entries.emplace_back(SimplePriority(std::move(order)), rational_field(require_field(entry, "weight")));
    }

    Instance instance(std::move(agents), std::move(items), std::move(orders));
    RandomPriority priority(std::move(entries));
    return {std::move(instance), std::move(priority)};
}

std::pair<Instance, RandomPriority> load_instance_text(std::string_view text) {
    Json document;
    try {
        document = Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw InputError(std::string("malformed JSON: ") + e.what());
    }
    return load_instance(document);
}

Json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw InputError("cannot read '" + path.string() + "'");
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    try {
        return Json::parse(buffer.str());
    } catch (const Json::parse_error& e) {
        throw InputError("malformed JSON in '" + path.string() + "': " + e.what());
    }
}

std::pair<Instance, RandomPriority> load_instance_file(const std::filesystem::path& path) {
    return load_instance(read_json_file(path));
}

Json instance_to_json(const Instance& instance, const RandomPriority& priority) {
    Json doc;
    doc["agents"] = instance.agents();
    const int real_items = instance.item_count() - instance.dummy_count();
    Json items = Json::array();
    for (int j = 0; j < real_items; ++j) {
        items.push_back(instance.items()[j]);
    }
    doc["items"] = items;
    Json prefs = Json::object();
    for (int i = 0; i < instance.agent_count(); ++i) {
        Json order = Json::array();
        for (ItemId item : instance.order(i)) {
            if (item < real_items) {
                order.push_back(instance.items()[item]);
            }
        }
        prefs[instance.agents()[i]] = order;
    }
    doc["preferences"] = prefs;
    Json entries = Json::array();
    for (const auto& [sigma, weight] : priority.entries()) {
        Json order = Json::array();
        for (AgentId agent : sigma.order()) {
            order.push_back(instance.agents()[agent]);
        }
        entries.push_back(Json{{"order", order}, {"weight", format_rational(weight)}});
    }
    doc["priority"] = entries;
    return doc;
}

Json assignment_to_json(const Instance& instance, const RandomAssignment& assignment) {
    require_consistent(instance, assignment);
    Json matrix = Json::object();
    for (int i = 0; i < assignment.agent_count(); ++i) {
        Json row = Json::object();
        for (int j = 0; j < assignment.item_count(); ++j) {
            row[instance.items()[j]] = format_rational(assignment.at(i, j));
        }
        matrix[instance.agents()[i]] = row;
    }
    return Json{{"matrix", matrix}};
}

RandomAssignment assignment_from_json(const Instance& instance, const Json& document) {
    const Json& matrix = require_field(document, "matrix");
    if (!matrix.is_object()) {
        throw InputError("\"matrix\" must be an object keyed by agent");
    }
    const auto agent_index = index_of(instance.agents());
    const auto item_index = index_of(instance.items());
    Matrix p(instance.agent_count(), std::vector<Rational>(instance.item_count(), Rational(0)));
    for (const auto& [agent, row] : matrix.items()) {
        const int i = lookup(agent_index, agent, "agent");
        if (!row.is_object()) {
            throw InputError("assignment row of agent '" + agent + "' must be an object keyed by item");
        }
        for (const auto& [item, value] : row.items()) {
            p[i][lookup(item_index, item, "item")] = rational_field(value);
        }
    }
    return RandomAssignment(std::move(p));
}

Json lottery_to_json(const Instance& instance, const Lottery& lottery) {
    Json out = Json::array();
    for (const auto& [f, weight] : lottery.entries()) {
        Json assignment = Json::object();
        for (int i = 0; i < f.agent_count(); ++i) {
            assignment[instance.agents()[i]] = instance.items()[f[i]];
        }
        out.push_back(Json{{"assignment", assignment}, {"weight", format_rational(weight)}});
    }
    return out;
}

Lottery lottery_from_json(const Instance& instance, const Json& document) {
    if (!document.is_array()) {
        throw InputError("lottery document must be an array");
    }
    const auto agent_index = index_of(instance.agents());
    const auto item_index = index_of(instance.items());
    std::vector<Lottery::Entry> entries;
    for (const auto& entry : document) {
        const Json& assignment = require_field(entry, "assignment");
        if (!assignment.is_object() || static_cast<int>(assignment.size()) != instance.agent_count()) {
            throw InputError("lottery assignment must map every agent to an item");
        }
        std::vector<ItemId> items(instance.agent_count(), -1);
        for (const auto& [agent, item] : assignment.items()) {
            if (!item.is_string()) {
                throw InputError("lottery assignment values must be item names");
            }
            items[lookup(agent_index, agent, "agent")] = lookup(item_index, item.get<std::string>(), "item");
        }
        entries.emplace_back(SimpleAssignment(std::move(items), instance.item_count()),
                             rational_field(require_field(entry, "weight")));
    }
    return Lottery(std::move(entries));
}

}  // namespace fairassign
