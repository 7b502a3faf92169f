#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "tlc/event.hpp"
#include "tlc/value.hpp"

namespace tlc {

struct HandlerOutput {
  Value state;
  std::vector<ChildRequest> requests;
  std::vector<UserEvent> indications;
};

// A pure state-machine component: initial state plus three handlers.
// Handlers must be deterministic functions of their arguments and throw
// Error("unhandled-event") for kinds outside the component's interface.
struct ComponentDef {
  std::string name;
  int num_children = 0;
  std::function<Value(NodeId)> init;
  std::function<HandlerOutput(NodeId, const Value&, const UserEvent&)> on_request;
  std::function<HandlerOutput(NodeId, const Value&, int, const UserEvent&)> on_indication;
  std::function<HandlerOutput(NodeId, const Value&)> on_periodic;
  // Named projections over reachable states, registered for the assertion
  // language (e.g. counter(s(n))).
  std::map<std::string, std::function<Value(const Value&)>> state_fields;
};

// Stack tree: a component with substacks, or a basic link leaf.
class StackDef {
 public:
  static StackDef link();

  bool is_link() const { return comp_ == nullptr; }
  const ComponentDef& component() const;
  const std::vector<StackDef>& substacks() const;

  friend StackDef make_stack(ComponentDef component, std::vector<StackDef> substacks);

 private:
  std::shared_ptr<const ComponentDef> comp_;
  std::shared_ptr<const std::vector<StackDef>> subs_;
};

// Builds a stack node; throws Error("arity-mismatch") when the substack
// count differs from component.num_children.
StackDef make_stack(ComponentDef component, std::vector<StackDef> substacks);

// Subtree at location d (indices read from the last element to the first);
// throws Error("no-such-location") for out-of-range indices.
const StackDef& stack_at(const StackDef& stack, const Location& d);

// All locations of the tree in pre-order, each with its subtree.
std::vector<std::pair<Location, const StackDef*>> stack_locations(const StackDef& stack);

// Dispatches to the handler selected by trigger. arg.child is ignored for
// requests; only arg.event is used. Periodic ignores arg entirely.
HandlerOutput invoke(const ComponentDef& component, Orientation trigger, NodeId n,
                     const Value& state, const ChildRequest& arg = {});

}  // namespace tlc
