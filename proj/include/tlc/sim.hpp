#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "tlc/component.hpp"
#include "tlc/event.hpp"

namespace tlc {

// Deterministic stream: splitmix64 over a 64-bit state.
struct Rng {
  std::uint64_t state = 0;

  explicit Rng(std::uint64_t seed = 0) : state(seed) {}
  std::uint64_t next();
  std::uint64_t below(std::uint64_t bound);  // uniform in [0, bound)
  double unit();                             // uniform in [0, 1)
};

struct Message {
  NodeId from = 0;
  NodeId to = 0;
  Location at;  // location of the receiving link
  Value payload;
};

struct World {
  std::map<Location, DistState> sigma;
  std::vector<Message> ms;  // in-transit multiset, insertion order
  std::set<NodeId> failed;
  int round = 0;
  std::int64_t next_ei = 0;
};

struct RequestInjection {
  int round = 0;
  NodeId node = 0;
  UserEvent event;
};

struct Scenario {
  StackDef stack;
  std::string stack_json = "\"link\"";  // preset name or composition tree
  int nodes = 1;
  int r_gst = 0;
  int rounds = 0;  // horizon
  std::uint64_t seed = 0;
  std::vector<RequestInjection> requests;          // schedule order preserved
  std::vector<std::pair<int, NodeId>> failures;    // (round, node)
  double drop_prob = 0.0;                          // per message, pre-GST rounds
  int max_dup = 1;                                 // duplicates drawn in 1..max_dup

  void validate() const;  // throws Error("validation")
  std::string digest() const;
};

World init_world(const StackDef& stack, const Scenario& scenario);

// Crash-stop failure of n; emits one fail label at [].
EventLabel step_fail(World& world, const Scenario& scenario, NodeId n);

// Executes a request event at location d on node n and the full cascade of
// issued events, depth-first in output-list order. Appends labels.
void cascade_request(World& world, const Scenario& scenario, Rng& rng, NodeId n,
                     const Location& d, const UserEvent& e,
                     std::optional<std::int64_t> pi, int ci,
                     std::vector<EventLabel>& out);

// Executes an indication event whose label location is d (issued by the
// component at d, applied to the parent at tail(d); recorded and consumed
// when d = []).
void cascade_indication(World& world, const Scenario& scenario, Rng& rng, NodeId n,
                        const Location& d, const UserEvent& e,
                        std::optional<std::int64_t> pi, int ci,
                        std::vector<EventLabel>& out);

// End of one round: drop messages to failed nodes (plus seeded losses before
// GST), deliver survivors in seeded-shuffled order, advance the round, then
// run the periodic cascade for every live node in ascending order.
void round_boundary(World& world, const Scenario& scenario, Rng& rng,
                    std::vector<EventLabel>& out);

Trace run_scenario(const Scenario& scenario);

std::uint64_t fnv1a64(const std::string& data);

}  // namespace tlc
