#include "tlc/event.hpp"

#include <algorithm>
#include <sstream>

namespace tlc {

bool extends(const Location& outer, const Location& inner) {
  if (inner.size() > outer.size()) return false;
  return std::equal(inner.rbegin(), inner.rend(), outer.rbegin());
}

Location child_location(int index, const Location& parent) {
  Location d;
  d.reserve(parent.size() + 1);
  d.push_back(index);
  d.insert(d.end(), parent.begin(), parent.end());
  return d;
}

std::string location_to_string(const Location& d) {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (i > 0) os << ", ";
    os << d[i];
  }
  os << "]";
  return os.str();
}

const char* orientation_name(Orientation o) {
  switch (o) {
    case Orientation::Request:
      return "req";
    case Orientation::Indication:
      return "ind";
    case Orientation::Periodic:
      return "per";
  }
  return "?";
}

Value UserEvent::to_value() const {
  return Value::tuple({Value::string(kind), Value::tuple(args)});
}

bool UserEvent::operator==(const UserEvent& other) const {
  return kind == other.kind && args == other.args;
}

std::string UserEvent::to_string() const {
  std::ostringstream os;
  os << kind << "(";
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i > 0) os << ", ";
    os << args[i].to_string();
  }
  os << ")";
  return os.str();
}

UserEvent periodic_event() { return UserEvent{"per", {}}; }

Value ChildRequest::to_value() const {
  return Value::tuple({Value::integer(child), event.to_value()});
}

Location EventLabel::applied_location() const {
  if (o == Orientation::Indication && !d.empty()) return Location(d.begin() + 1, d.end());
  return d;
}

bool mself(const EventLabel& label) {
  if (!label.o.has_value()) return false;
  switch (*label.o) {
    case Orientation::Request:
    case Orientation::Periodic:
      return label.d.empty();
    case Orientation::Indication:
      return label.d.size() == 1;
  }
  return false;
}

bool TraceHeader::scheduled_to_fail(NodeId n) const {
  return failure_round(n).has_value();
}

std::optional<int> TraceHeader::failure_round(NodeId n) const {
  for (const auto& [round, node] : failures)
    if (node == n) return round;
  return std::nullopt;
}

std::vector<NodeId> TraceHeader::correct_nodes() const {
  std::vector<NodeId> out;
  for (NodeId n = 0; n < nodes; ++n)
    if (!scheduled_to_fail(n)) out.push_back(n);
  return out;
}

}  // namespace tlc
