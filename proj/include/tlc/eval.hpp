#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tlc/assertion.hpp"
#include "tlc/event.hpp"

namespace tlc {

struct EvalContext {
  std::map<std::string, Value> bindings;  // rigid interpretation
  std::vector<NodeId> node_universe;
  std::set<NodeId> correct;
  std::vector<Value> value_universe;  // Herbrand set harvested from the trace
  std::map<std::string, std::function<Value(const Value&)>> projections;
  bool closed_world = false;
  // Value-sort quantifiers restrict to values that can influence the body
  // (plus a fresh representative); exact for the spec library, and switched
  // off automatically for bodies the analysis cannot account for.
  bool narrow_domains = true;
};

// Context derived from the trace header: node set, Correct = nodes minus
// scheduled failures, value universe from event payloads and rounds.
EvalContext context_for_trace(const Trace& trace);

Value eval_term(const TermPtr& t, const Trace& trace, std::size_t i, const EvalContext& ctx);

struct SelfProjection {
  Trace trace;                           // labels satisfying mself
  std::vector<std::size_t> position_map; // original position -> first self
                                         // position at or after it (may be
                                         // one past the projection end)
};

SelfProjection self_projection(const Trace& trace);

Verdict eval(const APtr& a, const Trace& trace, std::size_t i, const EvalContext& ctx);

// Evaluates at position 0 with free rigid variables universally closed over
// their sort domains.
Verdict check(const APtr& a, const Trace& trace, const EvalContext& ctx);

struct CheckReport {
  std::string name;
  Verdict verdict = Verdict::Unknown;
  std::optional<std::size_t> violation_position;
  std::map<std::string, Value> witness;  // rigid instantiation when False
};

CheckReport check_report(const std::string& name, const APtr& a, const Trace& trace,
                         const EvalContext& ctx);

}  // namespace tlc
