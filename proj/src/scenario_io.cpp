#include "tlc/scenario_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "tlc/error.hpp"
#include "tlc/protocol.hpp"

namespace tlc {

using ordered_json = nlohmann::ordered_json;

namespace {

Value value_from_scenario_json(const ordered_json& j) {
  // Shorthand scalars map to the obvious kinds; node ids and compounds use
  // the tagged form from the trace encoding.
  if (j.is_number_integer()) return Value::integer(j.get<std::int64_t>());
  if (j.is_string()) return Value::string(j.get<std::string>());
  if (j.is_boolean()) return Value::boolean(j.get<bool>());
  if (j.is_object() && j.contains("k")) {
    const std::string k = j.at("k").get<std::string>();
    if (k == "bot") return Value::bottom();
    if (k == "unit") return Value::unit();
    if (k == "bool") return Value::boolean(j.at("v").get<bool>());
    if (k == "int") return Value::integer(j.at("v").get<std::int64_t>());
    if (k == "str") return Value::string(j.at("v").get<std::string>());
    if (k == "node") return Value::node(j.at("v").get<NodeId>());
    if (k == "tup" || k == "seq" || k == "set") {
      Value::List items;
      for (const auto& x : j.at("v")) items.push_back(value_from_scenario_json(x));
      if (k == "tup") return Value::tuple(std::move(items));
      if (k == "seq") return Value::sequence(std::move(items));
      return Value::set(std::move(items));
    }
    if (k == "map") {
      Value::Entries entries;
      for (const auto& e : j.at("v"))
        entries.emplace_back(value_from_scenario_json(e.at(0)),
                             value_from_scenario_json(e.at(1)));
      return Value::map(std::move(entries));
    }
  }
  throw Error("validation", "bad value in scenario: " + j.dump());
}

StackDef stack_from_node(const ordered_json& j, int num_nodes) {
  if (j.is_string()) {
    const std::string name = j.get<std::string>();
    if (name == "link") return basic_link();
    if (is_preset_name(name)) return preset_by_name(name, num_nodes).stack;
    throw Error("validation", "unknown stack name: " + name);
  }
  if (j.is_object() && j.contains("component")) {
    ComponentDef c = component_by_name(j.at("component").get<std::string>(), num_nodes);
    std::vector<StackDef> subs;
    if (j.contains("children")) {
      for (const auto& child : j.at("children")) subs.push_back(stack_from_node(child, num_nodes));
    }
    return make_stack(std::move(c), std::move(subs));
  }
  throw Error("validation", "bad stack description: " + j.dump());
}

}  // namespace

StackDef stack_from_json(const std::string& json_text, int num_nodes) {
  try {
    return stack_from_node(ordered_json::parse(json_text), num_nodes);
  } catch (const nlohmann::json::exception& e) {
    throw Error("validation", std::string("bad stack json: ") + e.what());
  }
}

Scenario load_scenario(const std::string& json_text) {
  ordered_json j;
  try {
    j = ordered_json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw Error("validation", std::string("bad scenario json: ") + e.what());
  }
  try {
    Scenario s;
    if (!j.contains("stack")) throw Error("validation", "scenario needs a stack");
    s.stack_json = j.at("stack").dump();
    s.nodes = j.value("nodes", 1);
    s.r_gst = j.value("r_gst", 0);
    s.rounds = j.value("rounds", 0);
    s.seed = j.value("seed", std::uint64_t{0});
    s.drop_prob = j.value("drop_prob", 0.0);
    s.max_dup = j.value("max_dup", 1);
    if (j.contains("requests")) {
      for (const auto& r : j.at("requests")) {
        RequestInjection inj;
        inj.round = r.at(0).get<int>();
        inj.node = r.at(1).get<NodeId>();
        inj.event.kind = r.at(2).at("kind").get<std::string>();
        if (r.at(2).contains("args")) {
          for (const auto& a : r.at(2).at("args"))
            inj.event.args.push_back(value_from_scenario_json(a));
        }
        s.requests.push_back(std::move(inj));
      }
    }
    if (j.contains("failures")) {
      for (const auto& f : j.at("failures"))
        s.failures.emplace_back(f.at(0).get<int>(), f.at(1).get<NodeId>());
    }
    s.stack = stack_from_node(j.at("stack"), s.nodes);
    s.validate();
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw Error("validation", std::string("bad scenario: ") + e.what());
  }
}

Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("io", "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_scenario(buf.str());
}

}  // namespace tlc
