#include "tlc/trace_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "tlc/error.hpp"

namespace tlc {

using ordered_json = nlohmann::ordered_json;

namespace {

ordered_json value_to_json(const Value& v) {
  ordered_json j;
  switch (v.kind()) {
    case Value::Kind::Bottom:
      j["k"] = "bot";
      break;
    case Value::Kind::Boolean:
      j["k"] = "bool";
      j["v"] = v.as_bool();
      break;
    case Value::Kind::Integer:
      j["k"] = "int";
      j["v"] = v.as_int();
      break;
    case Value::Kind::String:
      j["k"] = "str";
      j["v"] = v.as_string();
      break;
    case Value::Kind::Node:
      j["k"] = "node";
      j["v"] = v.as_node();
      break;
    case Value::Kind::Unit:
      j["k"] = "unit";
      break;
    case Value::Kind::Tuple:
    case Value::Kind::Sequence:
    case Value::Kind::Set: {
      j["k"] = v.kind() == Value::Kind::Tuple ? "tup"
               : v.kind() == Value::Kind::Sequence ? "seq"
                                                   : "set";
      ordered_json arr = ordered_json::array();
      for (const auto& x : v.items()) arr.push_back(value_to_json(x));
      j["v"] = std::move(arr);
      break;
    }
    case Value::Kind::Map: {
      j["k"] = "map";
      ordered_json arr = ordered_json::array();
      for (const auto& [key, val] : v.entries())
        arr.push_back(ordered_json::array({value_to_json(key), value_to_json(val)}));
      j["v"] = std::move(arr);
      break;
    }
  }
  return j;
}

Value value_from_json(const ordered_json& j) {
  if (!j.is_object() || !j.contains("k")) throw Error("io", "bad value encoding");
  const std::string k = j.at("k").get<std::string>();
  if (k == "bot") return Value::bottom();
  if (k == "bool") return Value::boolean(j.at("v").get<bool>());
  if (k == "int") return Value::integer(j.at("v").get<std::int64_t>());
  if (k == "str") return Value::string(j.at("v").get<std::string>());
  if (k == "node") return Value::node(j.at("v").get<NodeId>());
  if (k == "unit") return Value::unit();
  if (k == "tup" || k == "seq" || k == "set") {
    Value::List items;
    for (const auto& x : j.at("v")) items.push_back(value_from_json(x));
    if (k == "tup") return Value::tuple(std::move(items));
    if (k == "seq") return Value::sequence(std::move(items));
    return Value::set(std::move(items));
  }
  if (k == "map") {
    Value::Entries entries;
    for (const auto& e : j.at("v"))
      entries.emplace_back(value_from_json(e.at(0)), value_from_json(e.at(1)));
    return Value::map(std::move(entries));
  }
  throw Error("io", "unknown value kind: " + k);
}

ordered_json event_to_json(const UserEvent& e) {
  ordered_json j;
  j["kind"] = e.kind;
  ordered_json args = ordered_json::array();
  for (const auto& a : e.args) args.push_back(value_to_json(a));
  j["args"] = std::move(args);
  return j;
}

UserEvent event_from_json(const ordered_json& j) {
  UserEvent e;
  e.kind = j.at("kind").get<std::string>();
  for (const auto& a : j.at("args")) e.args.push_back(value_from_json(a));
  return e;
}

ordered_json state_to_json(const DistState& s) {
  ordered_json arr = ordered_json::array();
  for (const auto& v : s) arr.push_back(value_to_json(v));
  return arr;
}

DistState state_from_json(const ordered_json& j) {
  DistState s;
  for (const auto& v : j) s.push_back(value_from_json(v));
  return s;
}

ordered_json label_to_json(const EventLabel& l) {
  ordered_json j;
  j["ei"] = l.ei;
  if (l.pi.has_value())
    j["pi"] = *l.pi;
  else
    j["pi"] = nullptr;
  j["ci"] = l.ci;
  j["n"] = l.n;
  j["r"] = l.r;
  j["d"] = l.d;
  if (l.o.has_value())
    j["o"] = orientation_name(*l.o);
  else
    j["o"] = nullptr;
  if (l.is_fail())
    j["fe"] = "fail";
  else
    j["fe"] = event_to_json(*l.fe.event);
  j["s"] = state_to_json(l.s);
  j["s_post"] = state_to_json(l.s_post);
  ordered_json ors = ordered_json::array();
  for (const auto& [child, event] : l.ors)
    ors.push_back(ordered_json::array({child, event_to_json(event)}));
  j["ors"] = std::move(ors);
  ordered_json ois = ordered_json::array();
  for (const auto& e : l.ois) ois.push_back(event_to_json(e));
  j["ois"] = std::move(ois);
  return j;
}

EventLabel label_from_json(const ordered_json& j) {
  EventLabel l;
  l.ei = j.at("ei").get<std::int64_t>();
  if (!j.at("pi").is_null()) l.pi = j.at("pi").get<std::int64_t>();
  l.ci = j.at("ci").get<int>();
  l.n = j.at("n").get<NodeId>();
  l.r = j.at("r").get<int>();
  l.d = j.at("d").get<Location>();
  if (!j.at("o").is_null()) {
    const std::string o = j.at("o").get<std::string>();
    if (o == "req")
      l.o = Orientation::Request;
    else if (o == "ind")
      l.o = Orientation::Indication;
    else if (o == "per")
      l.o = Orientation::Periodic;
    else
      throw Error("io", "unknown orientation: " + o);
  }
  if (j.at("fe").is_string() && j.at("fe").get<std::string>() == "fail")
    l.fe = FailOrEvent::fail();
  else
    l.fe = FailOrEvent::of(event_from_json(j.at("fe")));
  l.s = state_from_json(j.at("s"));
  l.s_post = state_from_json(j.at("s_post"));
  for (const auto& o : j.at("ors"))
    l.ors.push_back(ChildRequest{o.at(0).get<int>(), event_from_json(o.at(1))});
  for (const auto& o : j.at("ois")) l.ois.push_back(event_from_json(o));
  return l;
}

ordered_json header_to_json(const TraceHeader& h) {
  ordered_json j;
  j["digest"] = h.digest;
  j["stack"] = ordered_json::parse(h.stack_json);
  j["seed"] = h.seed;
  j["r_gst"] = h.r_gst;
  j["rounds"] = h.rounds;
  j["nodes"] = h.nodes;
  j["drop_prob"] = h.drop_prob;
  j["max_dup"] = h.max_dup;
  ordered_json fails = ordered_json::array();
  for (const auto& [round, node] : h.failures)
    fails.push_back(ordered_json::array({round, node}));
  j["failures"] = std::move(fails);
  return j;
}

TraceHeader header_from_json(const ordered_json& j) {
  TraceHeader h;
  h.digest = j.at("digest").get<std::string>();
  h.stack_json = j.at("stack").dump();
  h.seed = j.at("seed").get<std::uint64_t>();
  h.r_gst = j.at("r_gst").get<int>();
  h.rounds = j.at("rounds").get<int>();
  h.nodes = j.at("nodes").get<int>();
  h.drop_prob = j.at("drop_prob").get<double>();
  h.max_dup = j.at("max_dup").get<int>();
  for (const auto& f : j.at("failures"))
    h.failures.emplace_back(f.at(0).get<int>(), f.at(1).get<NodeId>());
  return h;
}

}  // namespace

void write_trace(const Trace& trace, std::ostream& os) {
  os << header_to_json(trace.header).dump() << "\n";
  for (const auto& l : trace.labels) os << label_to_json(l).dump() << "\n";
}

std::string trace_to_string(const Trace& trace) {
  std::ostringstream os;
  write_trace(trace, os);
  return os.str();
}

Trace read_trace(std::istream& is) {
  Trace trace;
  std::string line;
  if (!std::getline(is, line)) throw Error("io", "empty trace file");
  try {
    trace.header = header_from_json(ordered_json::parse(line));
    while (std::getline(is, line)) {
      if (line.empty()) continue;
      trace.labels.push_back(label_from_json(ordered_json::parse(line)));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error("io", std::string("malformed trace: ") + e.what());
  }
  return trace;
}

Trace read_trace_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("io", "cannot open " + path);
  return read_trace(in);
}

void write_trace_file(const Trace& trace, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("io", "cannot write " + path);
  write_trace(trace, out);
}

}  // namespace tlc
