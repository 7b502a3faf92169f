#include "tlc/sim.hpp"

#include <algorithm>
#include <sstream>

#include "tlc/error.hpp"

namespace tlc {

std::uint64_t Rng::next() {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t Rng::below(std::uint64_t bound) {
  return bound == 0 ? 0 : next() % bound;
}

double Rng::unit() {
  return static_cast<double>(next() >> 11) * (1.0 / 9007199254740992.0);
}

std::uint64_t fnv1a64(const std::string& data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

void Scenario::validate() const {
  if (nodes < 1) throw Error("validation", "nodes must be >= 1");
  if (rounds < 0) throw Error("validation", "rounds must be >= 0");
  if (r_gst < 0) throw Error("validation", "r_gst must be >= 0");
  if (max_dup < 1) throw Error("validation", "max_dup must be >= 1");
  if (drop_prob < 0.0 || drop_prob > 1.0)
    throw Error("validation", "drop_prob must be in [0, 1]");
  if (r_gst == 0 && drop_prob != 0.0)
    throw Error("validation", "drop_prob must be 0 when r_gst = 0");
  std::set<NodeId> failing;
  for (const auto& [round, node] : failures) {
    if (node < 0 || node >= nodes)
      throw Error("validation", "failure references unknown node " + std::to_string(node));
    if (round < 0 || round > rounds)
      throw Error("validation", "failure round out of horizon");
    if (!failing.insert(node).second)
      throw Error("validation", "node " + std::to_string(node) + " fails twice");
  }
  for (const auto& req : requests) {
    if (req.node < 0 || req.node >= nodes)
      throw Error("validation", "request references unknown node " + std::to_string(req.node));
    if (req.round < 0 || req.round > rounds)
      throw Error("validation", "request round out of horizon");
    for (const auto& [fr, fn] : failures) {
      if (fn == req.node && fr <= req.round)
        throw Error("validation", "request scheduled on failed node " + std::to_string(req.node));
    }
  }
}

std::string Scenario::digest() const {
  std::ostringstream os;
  os << stack_json << "|" << nodes << "|" << r_gst << "|" << rounds << "|" << seed << "|"
     << drop_prob << "|" << max_dup << "|";
  for (const auto& r : requests)
    os << r.round << "," << r.node << "," << r.event.to_value().to_string() << ";";
  os << "|";
  for (const auto& [r, n] : failures) os << r << "," << n << ";";
  std::ostringstream hex;
  hex << std::hex << fnv1a64(os.str());
  return hex.str();
}

namespace {

DistState snapshot(const World& world, const Location& d) {
  auto it = world.sigma.find(d);
  if (it == world.sigma.end()) throw Error("no-such-location", location_to_string(d));
  return it->second;
}

EventLabel base_label(World& world, NodeId n, const Location& d,
                      std::optional<Orientation> o, FailOrEvent fe,
                      std::optional<std::int64_t> pi, int ci) {
  EventLabel label;
  label.ei = world.next_ei++;
  label.pi = pi;
  label.ci = ci;
  label.n = n;
  label.r = world.round;
  label.d = d;
  label.o = o;
  label.fe = std::move(fe);
  return label;
}

void cascade_outputs(World& world, const Scenario& scenario, Rng& rng, NodeId n,
                     const Location& d, std::int64_t parent_ei,
                     const std::vector<ChildRequest>& requests,
                     const std::vector<UserEvent>& indications,
                     std::vector<EventLabel>& out) {
  for (std::size_t k = 0; k < requests.size(); ++k) {
    const auto& [child, event] = requests[k];
    cascade_request(world, scenario, rng, n, child_location(child, d), event, parent_ei,
                    static_cast<int>(k), out);
  }
  for (std::size_t k = 0; k < indications.size(); ++k) {
    cascade_indication(world, scenario, rng, n, d, indications[k], parent_ei,
                       static_cast<int>(k), out);
  }
}

void periodic_cascade(World& world, const Scenario& scenario, Rng& rng, NodeId n,
                      const StackDef& sub, const Location& d, std::vector<EventLabel>& out) {
  if (sub.is_link()) {
    EventLabel label =
        base_label(world, n, d, Orientation::Periodic, FailOrEvent::of(periodic_event()),
                   std::nullopt, 0);
    label.s = snapshot(world, d);
    label.s_post = label.s;
    out.push_back(std::move(label));
    return;
  }
  const ComponentDef& c = sub.component();
  DistState pre = snapshot(world, d);
  HandlerOutput ho = c.on_periodic(n, pre[n]);
  DistState post = pre;
  post[n] = ho.state;
  world.sigma[d] = post;

  EventLabel label =
      base_label(world, n, d, Orientation::Periodic, FailOrEvent::of(periodic_event()),
                 std::nullopt, 0);
  label.s = std::move(pre);
  label.s_post = std::move(post);
  label.ors = ho.requests;
  label.ois = ho.indications;
  std::int64_t ei = label.ei;
  out.push_back(std::move(label));

  cascade_outputs(world, scenario, rng, n, d, ei, ho.requests, ho.indications, out);
  for (int i = 0; i < static_cast<int>(sub.substacks().size()); ++i)
    periodic_cascade(world, scenario, rng, n, sub.substacks()[i], child_location(i, d), out);
}

}  // namespace

World init_world(const StackDef& stack, const Scenario& scenario) {
  scenario.validate();
  World world;
  for (const auto& [d, sub] : stack_locations(stack)) {
    DistState states;
    states.reserve(scenario.nodes);
    for (NodeId n = 0; n < scenario.nodes; ++n)
      states.push_back(sub->is_link() ? Value::unit() : sub->component().init(n));
    world.sigma.emplace(d, std::move(states));
  }
  return world;
}

EventLabel step_fail(World& world, const Scenario& scenario, NodeId n) {
  (void)scenario;
  if (world.failed.count(n))
    throw Error("already-failed", "node " + std::to_string(n) + " already failed");
  world.failed.insert(n);
  EventLabel label = base_label(world, n, {}, std::nullopt, FailOrEvent::fail(),
                                std::nullopt, 0);
  label.s = snapshot(world, {});
  label.s_post = label.s;
  return label;
}

void cascade_request(World& world, const Scenario& scenario, Rng& rng, NodeId n,
                     const Location& d, const UserEvent& e,
                     std::optional<std::int64_t> pi, int ci,
                     std::vector<EventLabel>& out) {
  const StackDef& sub = stack_at(scenario.stack, d);
  if (sub.is_link()) {
    if (e.kind != "send_l" || e.args.size() != 2)
      throw Error("unhandled-event", "link expects send_l(n, m), got " + e.to_string());
    NodeId target = e.args[0].as_node();
    if (target < 0 || target >= scenario.nodes)
      throw Error("validation", "send_l to unknown node " + std::to_string(target));
    int copies = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(scenario.max_dup)));
    for (int k = 0; k < copies; ++k)
      world.ms.push_back(Message{n, target, d, e.args[1]});

    EventLabel label =
        base_label(world, n, d, Orientation::Request, FailOrEvent::of(e), pi, ci);
    label.s = snapshot(world, d);
    label.s_post = label.s;
    out.push_back(std::move(label));
    return;
  }

  const ComponentDef& c = sub.component();
  DistState pre = snapshot(world, d);
  HandlerOutput ho = c.on_request(n, pre[n], e);
  DistState post = pre;
  post[n] = ho.state;
  world.sigma[d] = post;

  EventLabel label = base_label(world, n, d, Orientation::Request, FailOrEvent::of(e), pi, ci);
  label.s = std::move(pre);
  label.s_post = std::move(post);
  label.ors = ho.requests;
  label.ois = ho.indications;
  std::int64_t ei = label.ei;
  out.push_back(std::move(label));

  cascade_outputs(world, scenario, rng, n, d, ei, ho.requests, ho.indications, out);
}

void cascade_indication(World& world, const Scenario& scenario, Rng& rng, NodeId n,
                        const Location& d, const UserEvent& e,
                        std::optional<std::int64_t> pi, int ci,
                        std::vector<EventLabel>& out) {
  if (d.empty()) {
    // Top-level indication: recorded for the client, state unchanged.
    EventLabel label =
        base_label(world, n, d, Orientation::Indication, FailOrEvent::of(e), pi, ci);
    label.s = snapshot(world, {});
    label.s_post = label.s;
    out.push_back(std::move(label));
    return;
  }

  int from_child = d.front();
  Location parent(d.begin() + 1, d.end());
  const ComponentDef& c = stack_at(scenario.stack, parent).component();
  DistState pre = snapshot(world, parent);
  HandlerOutput ho = c.on_indication(n, pre[n], from_child, e);
  DistState post = pre;
  post[n] = ho.state;
  world.sigma[parent] = post;

  EventLabel label =
      base_label(world, n, d, Orientation::Indication, FailOrEvent::of(e), pi, ci);
  label.s = std::move(pre);
  label.s_post = std::move(post);
  label.ors = ho.requests;
  label.ois = ho.indications;
  std::int64_t ei = label.ei;
  out.push_back(std::move(label));

  cascade_outputs(world, scenario, rng, n, parent, ei, ho.requests, ho.indications, out);
}

void round_boundary(World& world, const Scenario& scenario, Rng& rng,
                    std::vector<EventLabel>& out) {
  // Messages to failed nodes are always removed; before GST each survivor is
  // independently dropped with drop_prob.
  std::vector<Message> surviving;
  for (const auto& m : world.ms) {
    if (world.failed.count(m.to)) continue;
    if (world.round < scenario.r_gst && rng.unit() < scenario.drop_prob) continue;
    surviving.push_back(m);
  }
  // Seeded shuffle realizes arbitrary reordering reproducibly.
  for (std::size_t i = surviving.size(); i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(rng.below(i));
    std::swap(surviving[i - 1], surviving[j]);
  }
  // Messages sent during delivery cascades stay in transit for next round.
  world.ms.clear();
  for (const auto& m : surviving) {
    cascade_indication(world, scenario, rng, m.to, m.at,
                       UserEvent{"deliver_l", {Value::node(m.from), m.payload}},
                       std::nullopt, 0, out);
  }

  world.round += 1;
  for (NodeId n = 0; n < scenario.nodes; ++n) {
    if (world.failed.count(n)) continue;
    periodic_cascade(world, scenario, rng, n, scenario.stack, {}, out);
  }
}

Trace run_scenario(const Scenario& scenario) {
  scenario.validate();
  World world = init_world(scenario.stack, scenario);
  Rng rng(scenario.seed);

  Trace trace;
  trace.header.digest = scenario.digest();
  trace.header.stack_json = scenario.stack_json;
  trace.header.seed = scenario.seed;
  trace.header.r_gst = scenario.r_gst;
  trace.header.rounds = scenario.rounds;
  trace.header.nodes = scenario.nodes;
  trace.header.drop_prob = scenario.drop_prob;
  trace.header.max_dup = scenario.max_dup;
  trace.header.failures = scenario.failures;

  for (int r = 0; r < scenario.rounds; ++r) {
    for (const auto& [round, node] : scenario.failures) {
      if (round == r) trace.labels.push_back(step_fail(world, scenario, node));
    }
    for (const auto& req : scenario.requests) {
      if (req.round == r) {
        cascade_request(world, scenario, rng, req.node, {}, req.event, std::nullopt, 0,
                        trace.labels);
      }
    }
    round_boundary(world, scenario, rng, trace.labels);
  }
  return trace;
}

}  // namespace tlc
