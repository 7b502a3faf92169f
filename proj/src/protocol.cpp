#include "tlc/protocol.hpp"

#include <algorithm>

#include "tlc/error.hpp"

namespace tlc {

namespace {

[[noreturn]] void unhandled(const std::string& component, const UserEvent& e) {
  throw Error("unhandled-event", component + " cannot handle " + e.to_string());
}

[[noreturn]] void unhandled_child(const std::string& component, int child, const UserEvent& e) {
  throw Error("unhandled-event", component + " cannot handle " + e.to_string() +
                                     " from child " + std::to_string(child));
}

Value msg(const std::string& tag, Value::List args) {
  return Value::tuple({Value::string(tag), Value::tuple(std::move(args))});
}

// Matches a <tag, <args...>> payload; fills out on success.
bool match_msg(const Value& m, const std::string& tag, std::size_t arity, Value::List& out) {
  if (m.kind() != Value::Kind::Tuple || m.size() != 2) return false;
  const auto& items = m.items();
  if (items[0].kind() != Value::Kind::String || items[0].as_string() != tag) return false;
  if (items[1].kind() != Value::Kind::Tuple || items[1].size() != arity) return false;
  out = items[1].items();
  return true;
}

Value tuple_field(const Value& s, std::size_t i) { return s.items().at(i); }

std::function<Value(const Value&)> field(std::size_t i) {
  return [i](const Value& s) { return tuple_field(s, i); };
}

HandlerOutput keep(const Value& s) { return HandlerOutput{s, {}, {}}; }

const Value kHeartbeat = Value::string("HB");

}  // namespace

StackDef basic_link() { return StackDef::link(); }

ComponentDef stubborn_link() {
  ComponentDef c;
  c.name = "slc";
  c.num_children = 1;
  c.init = [](NodeId) { return Value::set({}); };
  c.on_request = [](NodeId, const Value& s, const UserEvent& e) {
    if (e.kind == "send_sl" && e.args.size() == 2) {
      Value sent = s.with_inserted(Value::tuple({e.args[0], e.args[1]}));
      return HandlerOutput{sent, {{0, UserEvent{"send_l", e.args}}}, {}};
    }
    unhandled("slc", e);
  };
  c.on_indication = [](NodeId, const Value& s, int child, const UserEvent& e) {
    if (child == 0 && e.kind == "deliver_l" && e.args.size() == 2)
      return HandlerOutput{s, {}, {UserEvent{"deliver_sl", e.args}}};
    unhandled_child("slc", child, e);
  };
  c.on_periodic = [](NodeId, const Value& s) {
    HandlerOutput out = keep(s);
    for (const auto& pair : s.items()) {
      out.requests.push_back({0, UserEvent{"send_l", {pair.items()[0], pair.items()[1]}}});
    }
    return out;
  };
  c.state_fields["sent"] = [](const Value& s) { return s; };
  return c;
}

ComponentDef perfect_link() {
  ComponentDef c;
  c.name = "plc";
  c.num_children = 1;
  c.init = [](NodeId) { return Value::tuple({Value::integer(0), Value::set({})}); };
  c.on_request = [](NodeId, const Value& s, const UserEvent& e) {
    if (e.kind == "send_pl" && e.args.size() == 2) {
      Value counter = Value::integer(tuple_field(s, 0).as_int() + 1);
      Value payload = Value::tuple({counter, e.args[1]});
      return HandlerOutput{Value::tuple({counter, tuple_field(s, 1)}),
                           {{0, UserEvent{"send_sl", {e.args[0], payload}}}},
                           {}};
    }
    unhandled("plc", e);
  };
  c.on_indication = [](NodeId, const Value& s, int child, const UserEvent& e) {
    if (child == 0 && e.kind == "deliver_sl" && e.args.size() == 2 &&
        e.args[1].kind() == Value::Kind::Tuple && e.args[1].size() == 2) {
      const Value& sender = e.args[0];
      const Value& counter = e.args[1].items()[0];
      const Value& body = e.args[1].items()[1];
      Value key = Value::tuple({sender, counter});
      const Value& received = tuple_field(s, 1);
      if (received.contains(key)) return keep(s);
      return HandlerOutput{Value::tuple({tuple_field(s, 0), received.with_inserted(key)}),
                           {},
                           {UserEvent{"deliver_pl", {sender, body}}}};
    }
    unhandled_child("plc", child, e);
  };
  c.on_periodic = [](NodeId, const Value& s) { return keep(s); };
  c.state_fields["counter"] = field(0);
  c.state_fields["received"] = field(1);
  return c;
}

ComponentDef best_effort_broadcast(int num_nodes) {
  ComponentDef c;
  c.name = "bebc";
  c.num_children = 1;
  c.init = [](NodeId) { return Value::unit(); };
  c.on_request = [num_nodes](NodeId, const Value& s, const UserEvent& e) {
    if (e.kind == "broadcast_beb" && e.args.size() == 1) {
      HandlerOutput out = keep(s);
      for (NodeId k = 0; k < num_nodes; ++k)
        out.requests.push_back({0, UserEvent{"send_pl", {Value::node(k), e.args[0]}}});
      return out;
    }
    unhandled("bebc", e);
  };
  c.on_indication = [](NodeId, const Value& s, int child, const UserEvent& e) {
    if (child == 0 && e.kind == "deliver_pl" && e.args.size() == 2)
      return HandlerOutput{s, {}, {UserEvent{"deliver_beb", e.args}}};
    unhandled_child("bebc", child, e);
  };
  c.on_periodic = [](NodeId, const Value& s) { return keep(s); };
  return c;
}

ComponentDef uniform_reliable_broadcast(int num_nodes) {
  ComponentDef c;
  c.name = "urbc";
  c.num_children = 1;
  c.init = [](NodeId) {
    return Value::tuple({Value::integer(0), Value::set({}), Value::set({}), Value::map({})});
  };
  c.on_request = [](NodeId n, const Value& s, const UserEvent& e) {
    if (e.kind == "broadcast_urb" && e.args.size() == 1) {
      Value count = Value::integer(tuple_field(s, 0).as_int() + 1);
      Value id = Value::tuple({e.args[0], Value::node(n), count});
      return HandlerOutput{
          Value::tuple({count, tuple_field(s, 1), tuple_field(s, 2).with_inserted(id),
                        tuple_field(s, 3)}),
          {{0, UserEvent{"broadcast_beb", {id}}}},
          {}};
    }
    unhandled("urbc", e);
  };
  c.on_indication = [](NodeId, const Value& s, int child, const UserEvent& e) {
    if (child == 0 && e.kind == "deliver_beb" && e.args.size() == 2 &&
        e.args[1].kind() == Value::Kind::Tuple && e.args[1].size() == 3) {
      const Value& acker = e.args[0];
      const Value& id = e.args[1];
      const Value& pending = tuple_field(s, 2);
      const Value& ack = tuple_field(s, 3);
      Value acks = ack.get(id).value_or(Value::set({})).with_inserted(acker);
      Value ack2 = ack.with_entry(id, acks);
      if (!pending.contains(id)) {
        return HandlerOutput{Value::tuple({tuple_field(s, 0), tuple_field(s, 1),
                                           pending.with_inserted(id), ack2}),
                             {{0, UserEvent{"broadcast_beb", {id}}}},
                             {}};
      }
      return HandlerOutput{
          Value::tuple({tuple_field(s, 0), tuple_field(s, 1), pending, ack2}), {}, {}};
    }
    unhandled_child("urbc", child, e);
  };
  c.on_periodic = [num_nodes](NodeId, const Value& s) {
    const Value& delivered = tuple_field(s, 1);
    const Value& pending = tuple_field(s, 2);
    const Value& ack = tuple_field(s, 3);
    Value delivered2 = delivered;
    HandlerOutput out;
    for (const auto& id : pending.items()) {
      Value acks = ack.get(id).value_or(Value::set({}));
      if (2 * static_cast<int>(acks.size()) > num_nodes && !delivered2.contains(id)) {
        delivered2 = delivered2.with_inserted(id);
        out.indications.push_back(
            UserEvent{"deliver_urb", {id.items()[1], id.items()[0]}});
      }
    }
    out.state = Value::tuple({tuple_field(s, 0), delivered2, pending, ack});
    return out;
  };
  c.state_fields["count"] = field(0);
  c.state_fields["delivered"] = field(1);
  c.state_fields["pending"] = field(2);
  c.state_fields["ack"] = field(3);
  return c;
}

ComponentDef eventually_perfect_failure_detector(int num_nodes) {
  ComponentDef c;
  c.name = "epfdc";
  c.num_children = 1;
  c.init = [num_nodes](NodeId) {
    Value::List all;
    for (NodeId k = 0; k < num_nodes; ++k) all.push_back(Value::node(k));
    // Every node counts as alive in local round 0; nobody is suspected at
    // the first periodic tick.
    return Value::tuple({Value::map({{Value::integer(0), Value::set(std::move(all))}}),
                         Value::set({}), Value::integer(0)});
  };
  c.on_request = [](NodeId, const Value&, const UserEvent& e) -> HandlerOutput {
    unhandled("epfdc", e);
  };
  c.on_indication = [](NodeId, const Value& s, int child, const UserEvent& e) {
    if (child == 0 && e.kind == "deliver_l" && e.args.size() == 2 && e.args[1] == kHeartbeat) {
      const Value& alive = tuple_field(s, 0);
      const Value& round = tuple_field(s, 2);
      Value seen = alive.get(round).value_or(Value::set({})).with_inserted(e.args[0]);
      return HandlerOutput{
          Value::tuple({alive.with_entry(round, seen), tuple_field(s, 1), round}), {}, {}};
    }
    unhandled_child("epfdc", child, e);
  };
  c.on_periodic = [num_nodes](NodeId, const Value& s) {
    const Value& alive = tuple_field(s, 0);
    const Value& round = tuple_field(s, 2);
    Value seen = alive.get(round).value_or(Value::set({}));
    Value failed = tuple_field(s, 1);
    HandlerOutput out;
    for (NodeId k = 0; k < num_nodes; ++k) {
      Value node = Value::node(k);
      if (!seen.contains(node) && !failed.contains(node)) {
        failed = failed.with_inserted(node);
        out.indications.push_back(UserEvent{"suspect", {node}});
      } else if (seen.contains(node) && failed.contains(node)) {
        failed = failed.with_erased(node);
        out.indications.push_back(UserEvent{"restore", {node}});
      }
      out.requests.push_back({0, UserEvent{"send_l", {node, kHeartbeat}}});
    }
    out.state =
        Value::tuple({Value::map({}), failed, Value::integer(round.as_int() + 1)});
    return out;
  };
  c.state_fields["alive"] = field(0);
  c.state_fields["failed"] = field(1);
  c.state_fields["fd_round"] = field(2);
  return c;
}

ComponentDef eventual_leader_elector(int num_nodes) {
  ComponentDef c;
  c.name = "elec";
  c.num_children = 1;
  c.init = [](NodeId) { return Value::tuple({Value::set({}), Value::bottom()}); };
  c.on_request = [](NodeId, const Value&, const UserEvent& e) -> HandlerOutput {
    unhandled("elec", e);
  };
  c.on_indication = [](NodeId, const Value& s, int child, const UserEvent& e) {
    if (child == 0 && e.args.size() == 1) {
      const Value& suspected = tuple_field(s, 0);
      if (e.kind == "suspect")
        return keep(Value::tuple({suspected.with_inserted(e.args[0]), tuple_field(s, 1)}));
      if (e.kind == "restore")
        return keep(Value::tuple({suspected.with_erased(e.args[0]), tuple_field(s, 1)}));
    }
    unhandled_child("elec", child, e);
  };
  c.on_periodic = [num_nodes](NodeId, const Value& s) {
    const Value& suspected = tuple_field(s, 0);
    const Value& leader = tuple_field(s, 1);
    // rank(n) = n; the leader is the highest-ranked unsuspected node.
    NodeId best = -1;
    for (NodeId k = num_nodes - 1; k >= 0; --k) {
      if (!suspected.contains(Value::node(k))) {
        best = k;
        break;
      }
    }
    if (best < 0 || leader == Value::node(best)) return keep(s);
    return HandlerOutput{Value::tuple({suspected, Value::node(best)}),
                         {},
                         {UserEvent{"trust", {Value::node(best)}}}};
  };
  c.state_fields["suspected"] = field(0);
  c.state_fields["leader"] = field(1);
  return c;
}

namespace {

// ECC state layout: <ets, valts, val, rts, prop, wval, states, accepted, decided>
enum EcField { kEts = 0, kValts, kVal, kRts, kProp, kWval, kStates, kAccepted, kDecided };

Value ec_with(const Value& s, std::initializer_list<std::pair<int, Value>> updates) {
  Value::List items = s.items();
  for (const auto& [i, v] : updates) items[static_cast<std::size_t>(i)] = v;
  return Value::tuple(std::move(items));
}

// Highest timestamp wins; ties take the smallest sender; empty gives (0, bot).
std::pair<Value, Value> highest(const Value& states) {
  Value ts = Value::integer(0);
  Value val = Value::bottom();
  bool any = false;
  for (const auto& [node, entry] : states.entries()) {
    const Value& ets = entry.items()[0];
    if (!any || ts < ets) {
      ts = ets;
      val = entry.items()[1];
      any = true;
    }
  }
  return {ts, val};
}

}  // namespace

ComponentDef epoch_consensus(int num_nodes) {
  ComponentDef c;
  c.name = "ecc";
  c.num_children = 2;  // 0 = perfect link, 1 = best-effort broadcast
  c.init = [](NodeId n) {
    return Value::tuple({Value::integer(-n), Value::integer(0), Value::bottom(),
                         Value::integer(0), Value::bottom(), Value::map({}), Value::map({}),
                         Value::set({}), Value::boolean(false)});
  };
  c.on_request = [](NodeId n, const Value& s, const UserEvent& e) {
    if (e.kind == "propose_ec" && e.args.size() == 1)
      return keep(ec_with(s, {{kProp, e.args[0]}}));
    if (e.kind == "epoch_ec" && e.args.size() == 2) {
      if (e.args[0] == Value::node(n)) {
        Value ets = e.args[1];
        return HandlerOutput{
            ec_with(s, {{kEts, ets}, {kStates, Value::map({})}}),
            {{1, UserEvent{"broadcast_beb", {msg("PREPARE", {ets})}}}},
            {}};
      }
      return keep(s);  // only the named leader starts the epoch
    }
    unhandled("ecc", e);
  };
  c.on_indication = [num_nodes](NodeId, const Value& s, int child, const UserEvent& e) {
    Value::List m;
    if (child == 1 && e.kind == "deliver_beb" && e.args.size() == 2) {
      const Value& sender = e.args[0];
      if (match_msg(e.args[1], "PREPARE", 1, m)) {
        if (tuple_field(s, kRts) < m[0]) {
          Value state_msg =
              msg("STATE", {m[0], tuple_field(s, kValts), tuple_field(s, kVal)});
          return HandlerOutput{ec_with(s, {{kRts, m[0]}}),
                               {{0, UserEvent{"send_pl", {sender, state_msg}}}},
                               {}};
        }
        return keep(s);
      }
      if (match_msg(e.args[1], "ACCEPT", 2, m)) {
        if (!(m[0] < tuple_field(s, kRts))) {
          return HandlerOutput{ec_with(s, {{kValts, m[0]}, {kVal, m[1]}}),
                               {{0, UserEvent{"send_pl", {sender, msg("ACCEPTED", {m[0]})}}}},
                               {}};
        }
        return keep(s);
      }
      if (match_msg(e.args[1], "DECIDED", 2, m)) {
        if (!tuple_field(s, kDecided).as_bool()) {
          return HandlerOutput{ec_with(s, {{kDecided, Value::boolean(true)}}),
                               {},
                               {UserEvent{"decide_ec", {m[1]}}}};
        }
        return keep(s);
      }
      return keep(s);
    }
    if (child == 0 && e.kind == "deliver_pl" && e.args.size() == 2) {
      const Value& sender = e.args[0];
      if (match_msg(e.args[1], "STATE", 3, m)) {
        if (m[0] != tuple_field(s, kEts)) return keep(s);
        Value states = tuple_field(s, kStates).with_entry(sender, Value::tuple({m[1], m[2]}));
        const Value& wval = tuple_field(s, kWval);
        Value chosen_before = wval.get(tuple_field(s, kEts)).value_or(Value::bottom());
        const Value& prop = tuple_field(s, kProp);
        if (2 * static_cast<int>(states.size()) > num_nodes && chosen_before.is_bottom() &&
            !prop.is_bottom()) {
          auto [vts, val] = highest(states);
          Value chosen = val.is_bottom() ? prop : val;
          Value wval2 = wval.with_entry(tuple_field(s, kEts), chosen);
          return HandlerOutput{
              ec_with(s, {{kValts, vts}, {kVal, val}, {kWval, wval2},
                          {kStates, Value::map({})}}),
              {{1, UserEvent{"broadcast_beb",
                             {msg("ACCEPT", {tuple_field(s, kEts), chosen})}}}},
              {}};
        }
        return keep(ec_with(s, {{kStates, states}}));
      }
      if (match_msg(e.args[1], "ACCEPTED", 1, m)) {
        if (m[0] != tuple_field(s, kEts)) return keep(s);
        Value accepted = tuple_field(s, kAccepted).with_inserted(sender);
        if (2 * static_cast<int>(accepted.size()) > num_nodes) {
          Value chosen = tuple_field(s, kWval)
                             .get(tuple_field(s, kEts))
                             .value_or(Value::bottom());
          return HandlerOutput{
              ec_with(s, {{kAccepted, accepted}}),
              {{1, UserEvent{"broadcast_beb",
                             {msg("DECIDED", {tuple_field(s, kEts), chosen})}}}},
              {}};
        }
        return keep(ec_with(s, {{kAccepted, accepted}}));
      }
      return keep(s);
    }
    unhandled_child("ecc", child, e);
  };
  c.on_periodic = [](NodeId, const Value& s) { return keep(s); };
  c.state_fields["ets"] = field(kEts);
  c.state_fields["valts"] = field(kValts);
  c.state_fields["val"] = field(kVal);
  c.state_fields["rts"] = field(kRts);
  c.state_fields["prop"] = field(kProp);
  c.state_fields["wval"] = field(kWval);
  c.state_fields["states"] = field(kStates);
  c.state_fields["accepted"] = field(kAccepted);
  c.state_fields["decided"] = field(kDecided);
  return c;
}

ComponentDef epoch_change(int num_nodes) {
  ComponentDef c;
  c.name = "ehc";
  c.num_children = 3;  // 0 = perfect link, 1 = beb, 2 = eventual leader elector
  c.init = [num_nodes](NodeId n) {
    return Value::tuple({Value::node(num_nodes - 1), Value::integer(0), Value::integer(n),
                         Value::map({})});
  };
  c.on_request = [](NodeId, const Value&, const UserEvent& e) -> HandlerOutput {
    unhandled("ehc", e);
  };
  c.on_indication = [num_nodes](NodeId n, const Value& s, int child, const UserEvent& e) {
    const Value& trusted = tuple_field(s, 0);
    const Value& lastts = tuple_field(s, 1);
    const Value& ts = tuple_field(s, 2);
    const Value& nk = tuple_field(s, 3);
    if (child == 2 && e.kind == "trust" && e.args.size() == 1) {
      const Value& leader = e.args[0];
      Value nk2 = nk.with_entry(leader, Value::boolean(false));
      if (leader == Value::node(n)) {
        Value ts2 = Value::integer(ts.as_int() + num_nodes);
        return HandlerOutput{
            Value::tuple({leader, lastts, ts2, nk2}),
            {{1, UserEvent{"broadcast_beb", {msg("NEWEPOCH", {ts2})}}}},
            {}};
      }
      return keep(Value::tuple({leader, lastts, ts, nk2}));
    }
    Value::List m;
    if (child == 1 && e.kind == "deliver_beb" && e.args.size() == 2) {
      const Value& sender = e.args[0];
      if (match_msg(e.args[1], "NEWEPOCH", 1, m)) {
        bool known = nk.get(sender).value_or(Value::boolean(false)).as_bool();
        if (trusted == sender && !known) {
          // First NEWEPOCH from a freshly trusted leader: report our last
          // started timestamp so the leader can jump past it.
          return HandlerOutput{
              Value::tuple({trusted, lastts, ts, nk.with_entry(sender, Value::boolean(true))}),
              {{0, UserEvent{"send_pl", {sender, msg("STATE", {lastts})}}}},
              {}};
        }
        if (trusted == sender && lastts < m[0]) {
          return HandlerOutput{Value::tuple({trusted, m[0], ts, nk}),
                               {},
                               {UserEvent{"start_epoch", {m[0], sender}}}};
        }
        if (trusted != sender) {
          return HandlerOutput{s,
                               {{0, UserEvent{"send_pl", {sender, msg("NACK", {lastts})}}}},
                               {}};
        }
        return keep(s);
      }
      return keep(s);
    }
    if (child == 0 && e.kind == "deliver_pl" && e.args.size() == 2) {
      if (match_msg(e.args[1], "STATE", 1, m)) {
        if (trusted != Value::node(n)) return keep(s);
        if (ts < m[0]) {
          std::int64_t gap = m[0].as_int() - ts.as_int();
          Value ts2 = Value::integer(ts.as_int() + (gap / num_nodes + 1) * num_nodes);
          return HandlerOutput{
              Value::tuple({trusted, lastts, ts2, nk}),
              {{1, UserEvent{"broadcast_beb", {msg("NEWEPOCH", {ts2})}}}},
              {}};
        }
        return HandlerOutput{s,
                             {{1, UserEvent{"broadcast_beb", {msg("NEWEPOCH", {ts})}}}},
                             {}};
      }
      if (match_msg(e.args[1], "NACK", 1, m)) {
        if (trusted != Value::node(n)) return keep(s);
        return HandlerOutput{s,
                             {{1, UserEvent{"broadcast_beb", {msg("NEWEPOCH", {ts})}}}},
                             {}};
      }
      return keep(s);
    }
    unhandled_child("ehc", child, e);
  };
  c.on_periodic = [](NodeId, const Value& s) { return keep(s); };
  c.state_fields["trusted"] = field(0);
  c.state_fields["lastts"] = field(1);
  c.state_fields["ts"] = field(2);
  c.state_fields["nk"] = field(3);
  return c;
}

ComponentDef uniform_consensus(int num_nodes) {
  (void)num_nodes;
  ComponentDef c;
  c.name = "ucc";
  c.num_children = 2;  // 0 = epoch change, 1 = epoch consensus
  c.init = [](NodeId) {
    return Value::tuple(
        {Value::bottom(), Value::bottom(), Value::integer(0), Value::boolean(false)});
  };
  c.on_request = [](NodeId, const Value& s, const UserEvent& e) {
    if (e.kind == "propose_uc" && e.args.size() == 1) {
      return HandlerOutput{Value::tuple({e.args[0], tuple_field(s, 1), tuple_field(s, 2),
                                         tuple_field(s, 3)}),
                           {{1, UserEvent{"propose_ec", {e.args[0]}}}},
                           {}};
    }
    unhandled("ucc", e);
  };
  c.on_indication = [](NodeId n, const Value& s, int child, const UserEvent& e) {
    if (child == 0 && e.kind == "start_epoch" && e.args.size() == 2) {
      const Value& ets = e.args[0];
      const Value& leader = e.args[1];
      const Value& prop = tuple_field(s, 0);
      if (leader == Value::node(n)) {
        if (!prop.is_bottom()) {
          return HandlerOutput{Value::tuple({prop, leader, ets, Value::boolean(true)}),
                               {{1, UserEvent{"epoch_ec", {leader, ets}}}},
                               {}};
        }
        return keep(Value::tuple({prop, leader, ets, Value::boolean(false)}));
      }
      return HandlerOutput{Value::tuple({prop, leader, ets, Value::boolean(false)}),
                           {{1, UserEvent{"epoch_ec", {leader, ets}}}},
                           {}};
    }
    if (child == 1 && e.kind == "decide_ec" && e.args.size() == 1)
      return HandlerOutput{s, {}, {UserEvent{"decide_uc", {e.args[0]}}}};
    unhandled_child("ucc", child, e);
  };
  c.on_periodic = [](NodeId n, const Value& s) {
    const Value& prop = tuple_field(s, 0);
    const Value& leader = tuple_field(s, 1);
    const Value& ts = tuple_field(s, 2);
    if (leader == Value::node(n) && !tuple_field(s, 3).as_bool() && !prop.is_bottom()) {
      return HandlerOutput{Value::tuple({prop, leader, ts, Value::boolean(true)}),
                           {{1, UserEvent{"epoch_ec", {leader, ts}}}},
                           {}};
    }
    return keep(s);
  };
  c.state_fields["uc_prop"] = field(0);
  c.state_fields["uc_leader"] = field(1);
  c.state_fields["uc_ts"] = field(2);
  c.state_fields["uc_started"] = field(3);
  return c;
}

ComponentDef component_by_name(const std::string& name, int num_nodes) {
  if (name == "slc") return stubborn_link();
  if (name == "plc") return perfect_link();
  if (name == "bebc") return best_effort_broadcast(num_nodes);
  if (name == "urbc") return uniform_reliable_broadcast(num_nodes);
  if (name == "epfdc") return eventually_perfect_failure_detector(num_nodes);
  if (name == "elec") return eventual_leader_elector(num_nodes);
  if (name == "ecc") return epoch_consensus(num_nodes);
  if (name == "ehc") return epoch_change(num_nodes);
  if (name == "ucc") return uniform_consensus(num_nodes);
  throw Error("validation", "unknown component: " + name);
}

namespace {

StackDef sl_stack() { return make_stack(stubborn_link(), {basic_link()}); }
StackDef pl_stack() { return make_stack(perfect_link(), {sl_stack()}); }
StackDef beb_stack(int n) { return make_stack(best_effort_broadcast(n), {pl_stack()}); }
StackDef urb_stack(int n) { return make_stack(uniform_reliable_broadcast(n), {beb_stack(n)}); }
StackDef epfd_stack(int n) {
  return make_stack(eventually_perfect_failure_detector(n), {basic_link()});
}
StackDef eld_stack(int n) { return make_stack(eventual_leader_elector(n), {epfd_stack(n)}); }
StackDef ec_stack(int n) { return make_stack(epoch_consensus(n), {pl_stack(), beb_stack(n)}); }
StackDef ech_stack(int n) {
  return make_stack(epoch_change(n), {pl_stack(), beb_stack(n), eld_stack(n)});
}
StackDef uc_stack(int n) { return make_stack(uniform_consensus(n), {ech_stack(n), ec_stack(n)}); }

struct SpecSource {
  const char* name;
  const char* text;
  bool needs_assumptions;
};

const SpecSource kSpecSources[] = {
    {"SL1",
     "correct(n) and correct(n2) -> ((on n, [] req send_sl(n2, m)) =>> always eventually (on "
     "n2, [] ind deliver_sl(n, m)))",
     false},
    {"SL2", "(on n, [] ind deliver_sl(n2, m)) <~~ (on n2, [] req send_sl(n, m))", false},
    {"PL1",
     "correct(n) and correct(n2) -> ((on n, [] req send_pl(n2, m)) ~~> (on n2, [] ind "
     "deliver_pl(n, m)))",
     false},
    {"PL2",
     "((on n2, [] req send_pl(n, m)) =>> alwaysS not (on n2, [] req send_pl(n, m))) -> ((on n, "
     "[] ind deliver_pl(n2, m)) =>> alwaysS not (on n, [] ind deliver_pl(n2, m)))",
     false},
    {"PL3", "(on n, [] ind deliver_pl(n2, m)) <~~ (on n2, [] req send_pl(n, m))", false},
    {"BEB1",
     "correct(n) and correct(n2) -> ((on n2, [] req broadcast_beb(m)) ~~> (on n, [] ind "
     "deliver_beb(n2, m)))",
     false},
    {"BEB2",
     "((on n2, [] req broadcast_beb(m)) =>> alwaysS not (on n2, [] req broadcast_beb(m))) -> "
     "((on n, [] ind deliver_beb(n2, m)) =>> alwaysS not (on n, [] ind deliver_beb(n2, m)))",
     false},
    {"BEB3", "(on n, [] ind deliver_beb(n2, m)) <~~ (on n2, [] req broadcast_beb(m))", false},
    {"URB1",
     "correct(n) -> ((on n, [] req broadcast_urb(m)) ~~> (on n, [] ind deliver_urb(n, m)))",
     true},
    {"URB2",
     "((on n, [] req broadcast_urb(m)) =>> alwaysS not (on n, [] req broadcast_urb(m))) -> "
     "((on n2, [] ind deliver_urb(n, m)) =>> alwaysS not (on n2, [] ind deliver_urb(n, m)))",
     false},
    {"URB3", "(on n, [] ind deliver_urb(n2, m)) <~~ (on n2, [] req broadcast_urb(m))", false},
    {"URB4",
     "correct(n) -> ((on n2, [] ind deliver_urb(n3, m)) =>> (eventually (on n, [] ind "
     "deliver_urb(n3, m)) or eventuallyP (on n, [] ind deliver_urb(n3, m))))",
     true},
    {"EPFD1",
     "correct(n) and not correct(n2) -> eventually ((on n, [] ind suspect(n2)) and alwaysS not "
     "(on n, [] ind restore(n2)))",
     false},
    {"EPFD2",
     "correct(n) and correct(n2) -> ((always not (on n, [] ind suspect(n2))) or eventually "
     "((on n, [] ind restore(n2)) and alwaysS not (on n, [] ind suspect(n2))))",
     false},
    {"ELE1",
     "exists l : node . correct(l) and (correct(n) -> eventually ((on n, [] ind trust(l)) and "
     "alwaysS (forall l2 : node . not (on n, [] ind trust(l2)))))",
     false},
    {"EC1", "(on n, [] ind decide_ec(v)) <~~ (exists n2 : node . on n2, [] req propose_ec(v))",
     false},
    {"EC2",
     "(on n2, [] ind decide_ec(v2)) =>> alwaysP ((on n, [] ind decide_ec(v)) -> v = v2)",
     false},
    {"EC3", "(on n, [] ind decide_ec(v)) =>> alwaysS not (on n, [] ind decide_ec(v2))", false},
    {"EC4",
     "correct(nl) -> (((on nl, [] req epoch_ec(nl, ts)) and eventuallyP (on nl, [] req "
     "propose_ec(v))) =>> (forall n : node . correct(n) -> eventually exists v2 : value . on "
     "n, [] ind decide_ec(v2)))",
     true},
    {"ECH1",
     "correct(n) -> ((on n, [] ind start_epoch(ts, nl)) =>> alwaysS ((on n, [] ind "
     "start_epoch(ts2, nl2)) -> ts < ts2))",
     false},
    {"ECH2",
     "correct(n) and correct(n2) -> ((on n, [] ind start_epoch(ts, nl)) =>> alwaysP ((on n2, "
     "[] ind start_epoch(ts, nl2)) -> nl = nl2))",
     false},
    {"ECH3",
     "exists ts : value . exists nl : node . correct(nl) and (correct(n) -> eventually ((on n, "
     "[] ind start_epoch(ts, nl)) and alwaysS (forall ts2 : value . forall nl2 : node . not "
     "(on n, [] ind start_epoch(ts2, nl2)))))",
     true},
    {"UC1",
     "(forall n2 : node . correct(n2) -> exists v : value . eventually (on n2, [] req "
     "propose_uc(v))) -> (correct(n) -> eventually exists v2 : value . on n, [] ind "
     "decide_uc(v2))",
     true},
    {"UC2", "(on n, [] ind decide_uc(v)) <~~ (exists n2 : node . on n2, [] req propose_uc(v))",
     false},
    {"UC3", "(on n, [] ind decide_uc(v)) =>> alwaysS not (on n, [] ind decide_uc(v2))", false},
    {"UC4",
     "(on n2, [] ind decide_uc(v2)) =>> alwaysP ((on n, [] ind decide_uc(v)) -> v = v2)",
     false},
};

const char* kMajorityAssumption = "2 * size(Correct) > size(Nodes)";

std::vector<std::string> preset_spec_names(const std::string& preset) {
  if (preset == "sl") return {"SL1", "SL2"};
  if (preset == "pl") return {"PL1", "PL2", "PL3"};
  if (preset == "beb") return {"BEB1", "BEB2", "BEB3"};
  if (preset == "urb") return {"URB1", "URB2", "URB3", "URB4"};
  if (preset == "epfd") return {"EPFD1", "EPFD2"};
  if (preset == "eld") return {"ELE1"};
  if (preset == "ec") return {"EC1", "EC2", "EC3", "EC4"};
  if (preset == "ech") return {"ECH1", "ECH2", "ECH3"};
  if (preset == "uc") return {"UC1", "UC2", "UC3", "UC4"};
  return {};
}

bool preset_assumes_majority(const std::string& preset) {
  return preset == "urb" || preset == "ec" || preset == "ech" || preset == "uc";
}

}  // namespace

const SymbolTable& library_symbols() {
  static const SymbolTable table = [] {
    SymbolTable t = SymbolTable::with_builtins();
    // Field names are stable across node counts; harvest from 1-node defs.
    for (const char* name :
         {"slc", "plc", "bebc", "urbc", "epfdc", "elec", "ecc", "ehc", "ucc"}) {
      for (const auto& [field, fn] : component_by_name(name, 1).state_fields) t.add(field);
    }
    return t;
  }();
  return table;
}

std::map<std::string, std::function<Value(const Value&)>> library_projections() {
  std::map<std::string, std::function<Value(const Value&)>> out;
  for (const char* name : {"slc", "plc", "bebc", "urbc", "epfdc", "elec", "ecc", "ehc", "ucc"}) {
    for (auto& [field, fn] : component_by_name(name, 1).state_fields) out[field] = fn;
  }
  return out;
}

const std::vector<SpecEntry>& spec_library() {
  static const std::vector<SpecEntry> specs = [] {
    std::vector<SpecEntry> out;
    for (const auto& src : kSpecSources) {
      SpecEntry entry;
      entry.name = src.name;
      entry.text = src.text;
      entry.assertion = parse_assertion(src.text, library_symbols());
      entry.liveness = contains_future_eventuality(entry.assertion);
      entry.needs_assumptions = src.needs_assumptions;
      out.push_back(std::move(entry));
    }
    return out;
  }();
  return specs;
}

const SpecEntry* find_spec(const std::string& name) {
  for (const auto& s : spec_library())
    if (s.name == name) return &s;
  return nullptr;
}

std::vector<std::string> preset_names() {
  return {"sl", "pl", "beb", "urb", "epfd", "eld", "ec", "ech", "uc"};
}

bool is_preset_name(const std::string& name) {
  auto names = preset_names();
  return std::find(names.begin(), names.end(), name) != names.end();
}

ProtocolPreset preset_by_name(const std::string& name, int num_nodes) {
  ProtocolPreset p;
  p.name = name;
  if (name == "sl")
    p.stack = sl_stack();
  else if (name == "pl")
    p.stack = pl_stack();
  else if (name == "beb")
    p.stack = beb_stack(num_nodes);
  else if (name == "urb")
    p.stack = urb_stack(num_nodes);
  else if (name == "epfd")
    p.stack = epfd_stack(num_nodes);
  else if (name == "eld")
    p.stack = eld_stack(num_nodes);
  else if (name == "ec")
    p.stack = ec_stack(num_nodes);
  else if (name == "ech")
    p.stack = ech_stack(num_nodes);
  else if (name == "uc")
    p.stack = uc_stack(num_nodes);
  else
    throw Error("validation", "unknown preset: " + name);
  for (const auto& spec_name : preset_spec_names(name)) {
    const SpecEntry* entry = find_spec(spec_name);
    if (entry) p.specs.push_back(*entry);
  }
  if (preset_assumes_majority(name)) {
    p.assumption_texts.push_back(kMajorityAssumption);
    p.assumptions.push_back(parse_assertion(kMajorityAssumption, library_symbols()));
  }
  return p;
}

}  // namespace tlc
