#include "tlc/audit.hpp"

#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "tlc/component.hpp"
#include "tlc/error.hpp"
#include "tlc/scenario_io.hpp"

namespace tlc {

namespace {

using Result = AuditEntry::Result;

std::string ei_pair(const EventLabel& a, const EventLabel& b) {
  return "ei " + std::to_string(a.ei) + " vs ei " + std::to_string(b.ei);
}

std::string ei_of(const EventLabel& a) { return "ei " + std::to_string(a.ei); }

struct Auditor {
  const Trace& trace;
  std::map<std::int64_t, const EventLabel*> by_ei;
  std::map<std::int64_t, std::vector<const EventLabel*>> children_of;
  AuditReport report;

  explicit Auditor(const Trace& t) : trace(t) {
    for (const auto& l : trace.labels) {
      by_ei.emplace(l.ei, &l);
      if (l.pi.has_value()) children_of[*l.pi].push_back(&l);
    }
  }

  void add(const std::string& axiom, Result r, std::string detail = "") {
    report.entries.push_back(AuditEntry{axiom, r, std::move(detail)});
  }

  template <typename F>
  void axiom(const std::string& name, F f) {
    std::string detail;
    bool pass = f(detail);
    add(name, pass ? Result::Pass : Result::Fail, detail);
  }

  // Issued requests execute exactly as often as issued, at the child
  // location, pointing back at the issuer (rules OR/OR' via the event ids).
  void check_or() {
    axiom("OR", [&](std::string& detail) {
      for (const auto& l : trace.labels) {
        Location from = l.applied_location();
        for (std::size_t k = 0; k < l.ors.size(); ++k) {
          const auto& [child, event] = l.ors[k];
          bool found = false;
          auto it = children_of.find(l.ei);
          if (it != children_of.end()) {
            for (const auto* e : it->second) {
              if (e->ci == static_cast<int>(k) && e->o == Orientation::Request &&
                  !e->is_fail() && *e->fe.event == event &&
                  e->d == child_location(child, from) && e->n == l.n) {
                found = true;
                break;
              }
            }
          }
          if (!found) {
            detail = "issued request never executed, issuer " + ei_of(l);
            return false;
          }
        }
      }
      return true;
    });
  }

  void check_oi() {
    axiom("OI", [&](std::string& detail) {
      for (const auto& l : trace.labels) {
        Location from = l.applied_location();
        for (std::size_t k = 0; k < l.ois.size(); ++k) {
          bool found = false;
          auto it = children_of.find(l.ei);
          if (it != children_of.end()) {
            for (const auto* e : it->second) {
              if (e->ci == static_cast<int>(k) && e->o == Orientation::Indication &&
                  !e->is_fail() && *e->fe.event == l.ois[k] && e->d == from && e->n == l.n) {
                found = true;
                break;
              }
            }
          }
          if (!found) {
            detail = "issued indication never executed, issuer " + ei_of(l);
            return false;
          }
        }
      }
      return true;
    });
  }

  // Every executed request/indication points back at the issuing label
  // whose output list carries it (rules OR'/OI').
  void check_or_prime() {
    axiom("OR'", [&](std::string& detail) {
      for (const auto& l : trace.labels) {
        if (l.o != Orientation::Request) continue;
        if (!l.pi.has_value()) {
          if (!l.d.empty()) {
            detail = "request without issuer off the top, " + ei_of(l);
            return false;
          }
          continue;  // injected top-level request
        }
        auto it = by_ei.find(*l.pi);
        if (it == by_ei.end() || it->second->ei >= l.ei) {
          detail = "dangling parent id, " + ei_of(l);
          return false;
        }
        const EventLabel& p = *it->second;
        if (l.ci < 0 || l.ci >= static_cast<int>(p.ors.size()) ||
            !(p.ors[l.ci].event == *l.fe.event) ||
            l.d != child_location(p.ors[l.ci].child, p.applied_location()) || p.n != l.n) {
          detail = "request does not match issuer output, " + ei_pair(l, p);
          return false;
        }
      }
      return true;
    });
  }

  void check_oi_prime() {
    axiom("OI'", [&](std::string& detail) {
      for (const auto& l : trace.labels) {
        if (l.o != Orientation::Indication) continue;
        if (!l.pi.has_value()) {
          // Message delivery cascades start at links without an issuer.
          if (l.is_fail() || l.fe.event->kind != "deliver_l") {
            detail = "indication without issuer that is not a link delivery, " + ei_of(l);
            return false;
          }
          continue;
        }
        auto it = by_ei.find(*l.pi);
        if (it == by_ei.end() || it->second->ei >= l.ei) {
          detail = "dangling parent id, " + ei_of(l);
          return false;
        }
        const EventLabel& p = *it->second;
        if (l.ci < 0 || l.ci >= static_cast<int>(p.ois.size()) ||
            !(p.ois[l.ci] == *l.fe.event) || l.d != p.applied_location() || p.n != l.n) {
          detail = "indication does not match issuer output, " + ei_pair(l, p);
          return false;
        }
      }
      return true;
    });
  }

  // Only the stepping node's state changes.
  void check_seq() {
    axiom("SEQ", [&](std::string& detail) {
      for (const auto& l : trace.labels) {
        if (l.s.size() != l.s_post.size()) {
          detail = "state width changed, " + ei_of(l);
          return false;
        }
        for (NodeId n = 0; n < static_cast<NodeId>(l.s.size()); ++n) {
          if (n != l.n && !(l.s[n] == l.s_post[n])) {
            detail = "state of node " + std::to_string(n) + " changed, " + ei_of(l);
            return false;
          }
        }
      }
      return true;
    });
  }

  void check_rseq() {
    axiom("RSEQ", [&](std::string& detail) {
      for (std::size_t i = 1; i < trace.labels.size(); ++i) {
        if (trace.labels[i].r < trace.labels[i - 1].r) {
          detail = "round decreased, " + ei_pair(trace.labels[i - 1], trace.labels[i]);
          return false;
        }
      }
      return true;
    });
  }

  void check_node() {
    axiom("NODE", [&](std::string& detail) {
      for (const auto& l : trace.labels) {
        if (l.n < 0 || l.n >= trace.header.nodes) {
          detail = "node outside the universe, " + ei_of(l);
          return false;
        }
      }
      return true;
    });
  }

  // Where a cascade started: injected request, link delivery or periodic.
  const EventLabel& cascade_root(const EventLabel& l) const {
    const EventLabel* cur = &l;
    while (cur->pi.has_value()) {
      auto it = by_ei.find(*cur->pi);
      if (it == by_ei.end()) break;
      cur = it->second;
    }
    return *cur;
  }

  // After GST a send reaches a live recipient at its delivery boundary: the
  // sending round itself, or the next round for sends that happen inside a
  // delivery cascade (those sit in transit across one boundary).
  void check_gst() {
    axiom("GST", [&](std::string& detail) {
      for (const auto& l : trace.labels) {
        if (l.o != Orientation::Request || l.is_fail() || l.fe.event->kind != "send_l")
          continue;
        if (l.r < trace.header.r_gst) continue;
        NodeId target = l.fe.event->args[0].as_node();
        const EventLabel& root = cascade_root(l);
        int due = l.r;
        if (!root.is_fail() && root.o == Orientation::Indication &&
            root.fe.event->kind == "deliver_l") {
          due = l.r + 1;
        }
        auto failure = trace.header.failure_round(target);
        if (failure && *failure <= due) continue;
        if (due >= trace.header.rounds) continue;  // horizon cut the boundary off
        auto key = link_key(l.n, target, l.d, l.fe.event->args[1]) + "#" + std::to_string(due);
        if (!deliveries_by_round.count(key)) {
          detail = "send after GST not delivered in its round, " + ei_of(l);
          return false;
        }
      }
      return true;
    });
  }

  static std::string link_key(NodeId from, NodeId to, const Location& d, const Value& payload) {
    return std::to_string(from) + ">" + std::to_string(to) + "@" + location_to_string(d) +
           ":" + payload.to_string();
  }

  std::set<std::string> deliveries_by_round;
  std::map<std::string, std::vector<std::int64_t>> sends_by_key;  // ascending ei

  void index_link_traffic() {
    for (const auto& l : trace.labels) {
      if (l.is_fail()) continue;
      if (l.o == Orientation::Indication && l.fe.event->kind == "deliver_l") {
        deliveries_by_round.insert(link_key(l.fe.event->args[0].as_node(), l.n, l.d,
                                            l.fe.event->args[1]) +
                                   "#" + std::to_string(l.r));
      }
      if (l.o == Orientation::Request && l.fe.event->kind == "send_l") {
        sends_by_key[link_key(l.n, l.fe.event->args[0].as_node(), l.d, l.fe.event->args[1])]
            .push_back(l.ei);
      }
    }
  }

  void check_nforge() {
    axiom("NFORGE", [&](std::string& detail) {
      for (const auto& l : trace.labels) {
        if (l.o != Orientation::Indication || l.is_fail() || l.fe.event->kind != "deliver_l")
          continue;
        auto it = sends_by_key.find(
            link_key(l.fe.event->args[0].as_node(), l.n, l.d, l.fe.event->args[1]));
        if (it == sends_by_key.end() || it->second.empty() || it->second.front() >= l.ei) {
          detail = "delivery without a matching earlier send, " + ei_of(l);
          return false;
        }
      }
      return true;
    });
  }

  // Bounded form: per (sender, receiver, link, payload), deliveries cannot
  // exceed max_dup copies per send.
  void check_fdup() {
    axiom("FDUP (bounded)", [&](std::string& detail) {
      std::map<std::string, std::pair<int, int>> counts;  // sends, deliveries
      auto key = [](NodeId from, NodeId to, const Location& d, const Value& payload) {
        return std::to_string(from) + ">" + std::to_string(to) + "@" +
               location_to_string(d) + ":" + payload.to_string();
      };
      for (const auto& l : trace.labels) {
        if (l.is_fail()) continue;
        if (l.o == Orientation::Request && l.fe.event->kind == "send_l")
          counts[key(l.n, l.fe.event->args[0].as_node(), l.d, l.fe.event->args[1])].first++;
        if (l.o == Orientation::Indication && l.fe.event->kind == "deliver_l")
          counts[key(l.fe.event->args[0].as_node(), l.n, l.d, l.fe.event->args[1])].second++;
      }
      for (const auto& [k, c] : counts) {
        if (c.second > c.first * trace.header.max_dup) {
          detail = "deliveries exceed max_dup x sends for " + k;
          return false;
        }
      }
      return true;
    });
  }

  // Finite form: every node that never fails takes exactly one top-level
  // periodic step per round from round 1 on.
  void check_aper() {
    axiom("APER (finite)", [&](std::string& detail) {
      for (NodeId n = 0; n < trace.header.nodes; ++n) {
        if (trace.header.scheduled_to_fail(n)) continue;
        std::map<int, int> per_round;
        for (const auto& l : trace.labels) {
          if (l.n == n && l.o == Orientation::Periodic && l.d.empty()) per_round[l.r]++;
        }
        for (int r = 1; r <= trace.header.rounds; ++r) {
          if (per_round[r] != 1) {
            detail = "node " + std::to_string(n) + " has " +
                     std::to_string(per_round[r]) + " periodic steps in round " +
                     std::to_string(r);
            return false;
          }
        }
      }
      return true;
    });
  }

  // Unique issue implies unique execution; with the event ids this
  // strengthens to executions == issues per (node, location, event).
  void check_unior() {
    axiom("UNIOR", [&](std::string& detail) {
      std::map<std::string, std::pair<int, int>> counts;
      for (const auto& l : trace.labels) {
        Location from = l.applied_location();
        for (const auto& [child, event] : l.ors) {
          counts[std::to_string(l.n) + "@" +
                 location_to_string(child_location(child, from)) + ":" +
                 event.to_value().to_string()]
              .first++;
        }
        if (l.o == Orientation::Request && !l.is_fail() && !l.d.empty()) {
          counts[std::to_string(l.n) + "@" + location_to_string(l.d) + ":" +
                 l.fe.event->to_value().to_string()]
              .second++;
        }
      }
      for (const auto& [k, c] : counts) {
        if (c.first != c.second) {
          detail = "issues " + std::to_string(c.first) + " vs executions " +
                   std::to_string(c.second) + " for " + k;
          return false;
        }
      }
      return true;
    });
  }

  void check_unioi() {
    axiom("UNIOI", [&](std::string& detail) {
      std::map<std::string, std::pair<int, int>> counts;
      for (const auto& l : trace.labels) {
        Location from = l.applied_location();
        for (const auto& event : l.ois) {
          counts[std::to_string(l.n) + "@" + location_to_string(from) + ":" +
                 event.to_value().to_string()]
              .first++;
        }
        if (l.o == Orientation::Indication && !l.is_fail() &&
            l.fe.event->kind != "deliver_l") {
          counts[std::to_string(l.n) + "@" + location_to_string(l.d) + ":" +
                 l.fe.event->to_value().to_string()]
              .second++;
        }
      }
      for (const auto& [k, c] : counts) {
        if (c.first != c.second) {
          detail = "issues " + std::to_string(c.first) + " vs executions " +
                   std::to_string(c.second) + " for " + k;
          return false;
        }
      }
      return true;
    });
  }

  // First label applied at each component location starts from the init
  // states; needs the stack from the header.
  void check_init() {
    StackDef stack;
    bool have_stack = true;
    try {
      stack = stack_from_json(trace.header.stack_json, trace.header.nodes);
    } catch (const Error&) {
      have_stack = false;
    }
    if (!have_stack) {
      add("INIT", Result::NotApplicable, "trace header does not name library components");
      return;
    }
    axiom("INIT", [&](std::string& detail) {
      std::set<Location> seen;
      for (const auto& l : trace.labels) {
        if (l.is_fail()) continue;
        Location at = l.applied_location();
        if (l.o == Orientation::Indication && l.d.empty()) continue;  // client view
        if (!seen.insert(at).second) continue;
        const StackDef& sub = stack_at(stack, at);
        for (NodeId n = 0; n < trace.header.nodes; ++n) {
          Value expect = sub.is_link() ? Value::unit() : sub.component().init(n);
          if (!(l.s[n] == expect)) {
            detail = "first event at " + location_to_string(at) +
                     " does not start from init, " + ei_of(l);
            return false;
          }
        }
      }
      return true;
    });
  }

  // On the self subtrace the post-state of each event is the pre-state of
  // the next.
  void check_postpre() {
    axiom("POSTPRE", [&](std::string& detail) {
      const EventLabel* prev = nullptr;
      for (const auto& l : trace.labels) {
        if (!mself(l)) continue;
        if (prev && !(prev->s_post == l.s)) {
          detail = "self state thread broken, " + ei_pair(*prev, l);
          return false;
        }
        prev = &l;
      }
      return true;
    });
  }

  // No label on a node after its fail label.
  void check_failed_silence() {
    axiom("FAILSTOP", [&](std::string& detail) {
      std::map<NodeId, std::int64_t> failed_at;
      for (const auto& l : trace.labels)
        if (l.is_fail()) failed_at.emplace(l.n, l.ei);
      for (const auto& l : trace.labels) {
        auto it = failed_at.find(l.n);
        if (it != failed_at.end() && l.ei > it->second) {
          detail = "label after fail, " + ei_of(l);
          return false;
        }
      }
      return true;
    });
  }

  void run() {
    index_link_traffic();
    check_or();
    check_oi();
    check_or_prime();
    check_oi_prime();
    check_seq();
    check_rseq();
    check_node();
    check_gst();
    check_nforge();
    check_fdup();
    check_aper();
    check_unior();
    check_unioi();
    check_init();
    check_postpre();
    check_failed_silence();
  }
};

}  // namespace

bool AuditReport::ok() const {
  for (const auto& e : entries)
    if (e.result == AuditEntry::Result::Fail) return false;
  return true;
}

const AuditEntry* AuditReport::entry(const std::string& axiom) const {
  for (const auto& e : entries)
    if (e.axiom == axiom) return &e;
  return nullptr;
}

AuditReport run_audit(const Trace& trace) {
  Auditor auditor(trace);
  auditor.run();
  return auditor.report;
}

void print_audit(const AuditReport& report, std::ostream& os) {
  for (const auto& e : report.entries) {
    os << e.axiom << ": ";
    switch (e.result) {
      case AuditEntry::Result::Pass:
        os << "pass";
        break;
      case AuditEntry::Result::Fail:
        os << "FAIL";
        break;
      case AuditEntry::Result::NotApplicable:
        os << "not applicable";
        break;
    }
    if (!e.detail.empty()) os << " (" << e.detail << ")";
    os << "\n";
  }
}

}  // namespace tlc
