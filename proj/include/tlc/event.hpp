#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tlc/value.hpp"

namespace tlc {

// Component location: child indices in reverse order, head = deepest branch.
// [] is the top component; extends(d2, d1) holds iff d1 is a suffix of d2.
using Location = std::vector<int>;

bool extends(const Location& outer, const Location& inner);
Location child_location(int index, const Location& parent);  // index :: parent
std::string location_to_string(const Location& d);

enum class Orientation { Request, Indication, Periodic };

const char* orientation_name(Orientation o);  // "req" | "ind" | "per"

// A user-level event: interface kind tag plus argument values.
struct UserEvent {
  std::string kind;
  std::vector<Value> args;

  Value to_value() const;  // <kind, <args...>> encoding
  bool operator==(const UserEvent& other) const;
  std::string to_string() const;
};

UserEvent periodic_event();  // the distinguished "per" event

// Either a user event or the fail marker.
struct FailOrEvent {
  std::optional<UserEvent> event;  // nullopt = fail

  static FailOrEvent fail() { return FailOrEvent{std::nullopt}; }
  static FailOrEvent of(UserEvent e) { return FailOrEvent{std::move(e)}; }
  bool is_fail() const { return !event.has_value(); }
};

// Per-node component state at one location; index = node id.
using DistState = std::vector<Value>;

struct ChildRequest {
  int child = 0;
  UserEvent event;

  Value to_value() const;  // <child, event>
};

// One executed event. s/s_post snapshot the distributed state of the
// component the event was applied to: location d for req/per, tail(d) for
// ind. Fail labels have o = nullopt, empty ors/ois and s == s_post.
struct EventLabel {
  std::int64_t ei = 0;
  std::optional<std::int64_t> pi;
  int ci = 0;
  NodeId n = 0;
  int r = 0;
  Location d;
  std::optional<Orientation> o;
  FailOrEvent fe;
  DistState s;
  DistState s_post;
  std::vector<ChildRequest> ors;
  std::vector<UserEvent> ois;

  bool is_fail() const { return fe.is_fail(); }
  // Location of the component the event was applied to (tail(d) for
  // indications; [] stays [] for top-level indications).
  Location applied_location() const;
};

// A self event executes on the top component: a top-level request or
// periodic, or a second-level indication.
bool mself(const EventLabel& label);

struct TraceHeader {
  std::string digest;        // fnv-1a of the canonical scenario text
  std::string stack_json;    // preset name or composition tree, as JSON text
  std::uint64_t seed = 0;
  int r_gst = 0;
  int rounds = 0;
  int nodes = 0;
  double drop_prob = 0.0;
  int max_dup = 1;
  std::vector<std::pair<int, NodeId>> failures;  // (round, node), schedule order

  bool scheduled_to_fail(NodeId n) const;
  std::optional<int> failure_round(NodeId n) const;
  std::vector<NodeId> correct_nodes() const;  // nodes minus scheduled failures
};

struct Trace {
  TraceHeader header;
  std::vector<EventLabel> labels;
};

}  // namespace tlc
