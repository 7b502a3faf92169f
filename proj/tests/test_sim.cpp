#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tlc/component.hpp"
#include "tlc/error.hpp"
#include "tlc/protocol.hpp"
#include "tlc/scenario_io.hpp"
#include "tlc/sim.hpp"
#include "tlc/trace_io.hpp"

using namespace tlc;

namespace {

Scenario pl_scenario(int nodes, int rounds) {
  Scenario s;
  s.stack = preset_by_name("pl", nodes).stack;
  s.stack_json = "\"pl\"";
  s.nodes = nodes;
  s.rounds = rounds;
  return s;
}

UserEvent send_pl(NodeId to, const std::string& m) {
  return UserEvent{"send_pl", {Value::node(to), Value::string(m)}};
}

}  // namespace

TEST_CASE("splitmix64 stream is reproducible") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());
  Rng c(43);
  CHECK(Rng(42).next() != c.next());
}

TEST_CASE("init_world maps every location and node to its init state") {
  Scenario s = pl_scenario(2, 1);
  World w = init_world(s.stack, s);
  CHECK(w.round == 0);
  CHECK(w.ms.empty());
  CHECK(w.failed.empty());
  REQUIRE(w.sigma.count(Location{}));
  REQUIRE(w.sigma.count(Location{0}));
  REQUIRE(w.sigma.count(Location{0, 0}));
  CHECK(w.sigma[{}][0] == Value::tuple({Value::integer(0), Value::set({})}));
  CHECK(w.sigma[{}][1] == Value::tuple({Value::integer(0), Value::set({})}));
  CHECK(w.sigma[{0}][0] == Value::set({}));
  CHECK(w.sigma[{0, 0}][1] == Value::unit());
}

TEST_CASE("step_fail moves the node into f exactly once") {
  Scenario s = pl_scenario(2, 1);
  World w = init_world(s.stack, s);
  EventLabel label = step_fail(w, s, 1);
  CHECK(w.failed.count(1) == 1);
  CHECK(label.is_fail());
  CHECK(!label.o.has_value());
  CHECK(label.d.empty());
  CHECK(label.s == label.s_post);
  CHECK_THROWS_AS(step_fail(w, s, 1), Error);
}

TEST_CASE("request cascade walks the stack and grows the message set") {
  Scenario s = pl_scenario(2, 1);
  World w = init_world(s.stack, s);
  Rng rng(s.seed);
  std::vector<EventLabel> labels;
  cascade_request(w, s, rng, 0, {}, send_pl(1, "m"), std::nullopt, 0, labels);

  // send_pl at [], send_sl at [0], send_l at [0, 0].
  REQUIRE(labels.size() == 3);
  CHECK(labels[0].d == Location{});
  CHECK(labels[1].d == Location{0});
  CHECK(labels[2].d == Location{0, 0});
  for (const auto& l : labels) CHECK(l.o == Orientation::Request);
  CHECK(labels[1].pi == labels[0].ei);
  CHECK(labels[2].pi == labels[1].ei);
  REQUIRE(w.ms.size() == 1);
  CHECK(w.ms[0].from == 0);
  CHECK(w.ms[0].to == 1);
  CHECK(w.ms[0].at == Location{0, 0});

  // Only the stepping node's column changed.
  CHECK(labels[0].s[1] == labels[0].s_post[1]);
  CHECK(labels[0].s_post[0] == Value::tuple({Value::integer(1), Value::set({})}));
}

TEST_CASE("max_dup bounds duplicate enqueues") {
  Scenario s = pl_scenario(2, 1);
  s.max_dup = 3;
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    World w = init_world(s.stack, s);
    Rng rng(seed);
    std::vector<EventLabel> labels;
    cascade_request(w, s, rng, 0, {}, send_pl(1, "m"), std::nullopt, 0, labels);
    CHECK(w.ms.size() >= 1);
    CHECK(w.ms.size() <= 3);
  }
}

TEST_CASE("indication cascade delivers through the perfect link") {
  Scenario s = pl_scenario(2, 2);
  World w = init_world(s.stack, s);
  Rng rng(s.seed);
  std::vector<EventLabel> labels;
  UserEvent stamped{"deliver_l",
                    {Value::node(0), Value::tuple({Value::integer(1), Value::string("m")})}};
  cascade_indication(w, s, rng, 1, {0, 0}, stamped, std::nullopt, 0, labels);

  // deliver_l at [0,0] into slc, deliver_sl at [0] into plc, deliver_pl at [].
  REQUIRE(labels.size() == 3);
  CHECK(labels[0].d == Location{0, 0});
  CHECK(labels[1].d == Location{0});
  CHECK(labels[2].d == Location{});
  for (const auto& l : labels) CHECK(l.o == Orientation::Indication);
  // An indication label snapshots the parent component's state.
  CHECK(labels[1].s_post[1] ==
        Value::tuple({Value::integer(0),
                      Value::set({Value::tuple({Value::node(0), Value::integer(1)})})}));
  // Top-level indications leave sigma untouched.
  CHECK(labels[2].s == labels[2].s_post);

  // The duplicate is absorbed by the perfect link.
  std::vector<EventLabel> again;
  cascade_indication(w, s, rng, 1, {0, 0}, stamped, std::nullopt, 0, again);
  REQUIRE(again.size() == 2);
  CHECK(again[1].d == Location{0});
  CHECK(again[1].ois.empty());
}

TEST_CASE("round boundary drops to failed nodes and runs periodics") {
  Scenario s = pl_scenario(2, 2);
  World w = init_world(s.stack, s);
  Rng rng(s.seed);
  std::vector<EventLabel> labels;
  cascade_request(w, s, rng, 0, {}, send_pl(1, "m"), std::nullopt, 0, labels);
  w.failed.insert(1);
  labels.clear();
  round_boundary(w, s, rng, labels);
  // The message to node 1 disappears without a delivery label.
  for (const auto& l : labels) {
    CHECK(!(l.o == Orientation::Indication && !l.is_fail() &&
            l.fe.event->kind == "deliver_l"));
  }
  CHECK(w.round == 1);
  // Periodic labels belong to the new round and only to live nodes.
  int per_top = 0;
  for (const auto& l : labels) {
    if (l.o == Orientation::Periodic) {
      CHECK(l.r == 1);
      CHECK(l.n == 0);
      if (l.d.empty()) ++per_top;
    }
  }
  CHECK(per_top == 1);
}

TEST_CASE("pre-GST drop probability one silences the network") {
  Scenario s = pl_scenario(2, 2);
  s.r_gst = 2;
  s.drop_prob = 1.0;
  World w = init_world(s.stack, s);
  Rng rng(s.seed);
  std::vector<EventLabel> labels;
  cascade_request(w, s, rng, 0, {}, send_pl(1, "m"), std::nullopt, 0, labels);
  labels.clear();
  round_boundary(w, s, rng, labels);
  for (const auto& l : labels) {
    CHECK(!(l.o == Orientation::Indication && !l.is_fail() &&
            l.fe.event->kind == "deliver_l"));
  }
}

TEST_CASE("run_scenario is deterministic byte for byte") {
  Scenario s = pl_scenario(3, 5);
  s.seed = 99;
  s.r_gst = 1;
  s.drop_prob = 0.5;
  s.max_dup = 2;
  s.requests.push_back({0, 0, send_pl(1, "m1")});
  s.requests.push_back({1, 2, send_pl(0, "m2")});
  s.failures.emplace_back(3, 1);
  std::string a = trace_to_string(run_scenario(s));
  std::string b = trace_to_string(run_scenario(s));
  CHECK(a == b);
  s.seed = 100;
  CHECK(trace_to_string(run_scenario(s)) != a);
}

TEST_CASE("event ids are unique and strictly increasing; parents come first") {
  Scenario s = pl_scenario(3, 6);
  s.r_gst = 1;
  s.drop_prob = 0.5;
  s.max_dup = 2;
  s.seed = 21;
  s.requests.push_back({0, 0, send_pl(1, "m1")});
  s.requests.push_back({1, 1, send_pl(2, "m2")});
  Trace t = run_scenario(s);
  for (std::size_t i = 1; i < t.labels.size(); ++i)
    CHECK(t.labels[i - 1].ei < t.labels[i].ei);
  for (const auto& l : t.labels) {
    if (l.pi.has_value()) CHECK(*l.pi < l.ei);
  }
}

TEST_CASE("quiescent scenario yields only periodic labels") {
  Scenario s = pl_scenario(2, 3);
  Trace t = run_scenario(s);
  CHECK(!t.labels.empty());
  for (const auto& l : t.labels) CHECK(l.o == Orientation::Periodic);
}

TEST_CASE("no labels on a node after its failure") {
  Scenario s = pl_scenario(3, 6);
  s.requests.push_back({0, 0, send_pl(1, "m")});
  s.failures.emplace_back(2, 1);
  Trace t = run_scenario(s);
  bool seen_fail = false;
  for (const auto& l : t.labels) {
    if (l.is_fail()) {
      CHECK(l.n == 1);
      seen_fail = true;
      continue;
    }
    if (seen_fail) CHECK(l.n != 1);
  }
  CHECK(seen_fail);
}

TEST_CASE("the overview walkthrough shape: down the stack and back up") {
  // One top request on a two-level stack; the trace inside the round is
  // [] down, [0] down, [0,0] down, then deliveries come back up later.
  Scenario s = pl_scenario(2, 2);
  s.r_gst = 0;
  s.requests.push_back({0, 0, send_pl(1, "m")});
  Trace t = run_scenario(s);
  std::vector<Location> down;
  for (const auto& l : t.labels) {
    if (l.o == Orientation::Request) down.push_back(l.d);
  }
  REQUIRE(down.size() >= 3);
  CHECK(down[0] == Location{});
  CHECK(down[1] == Location{0});
  CHECK(down[2] == Location{0, 0});
  std::vector<Location> up;
  for (const auto& l : t.labels) {
    if (l.o == Orientation::Indication) up.push_back(l.d);
  }
  REQUIRE(up.size() >= 3);
  CHECK(up[0] == Location{0, 0});
  CHECK(up[1] == Location{0});
  CHECK(up[2] == Location{});
}

TEST_CASE("scenario validation rejects bad schedules") {
  Scenario s = pl_scenario(2, 3);
  s.failures.emplace_back(1, 7);
  CHECK_THROWS_AS(s.validate(), Error);
  s.failures.clear();
  s.failures.emplace_back(1, 1);
  s.requests.push_back({2, 1, send_pl(0, "m")});
  CHECK_THROWS_AS(s.validate(), Error);  // request on a failed node
  s.requests.clear();
  s.drop_prob = 0.5;
  CHECK_THROWS_AS(s.validate(), Error);  // drops need a GST horizon
}
