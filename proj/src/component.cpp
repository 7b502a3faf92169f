#include "tlc/component.hpp"

#include "tlc/error.hpp"

namespace tlc {

StackDef StackDef::link() { return StackDef{}; }

const ComponentDef& StackDef::component() const {
  if (!comp_) throw Error("no-such-location", "link has no component");
  return *comp_;
}

const std::vector<StackDef>& StackDef::substacks() const {
  static const std::vector<StackDef> empty;
  return subs_ ? *subs_ : empty;
}

StackDef make_stack(ComponentDef component, std::vector<StackDef> substacks) {
  if (static_cast<int>(substacks.size()) != component.num_children) {
    throw Error("arity-mismatch",
                component.name + " expects " + std::to_string(component.num_children) +
                    " substacks, got " + std::to_string(substacks.size()));
  }
  StackDef s;
  s.comp_ = std::make_shared<const ComponentDef>(std::move(component));
  s.subs_ = std::make_shared<const std::vector<StackDef>>(std::move(substacks));
  return s;
}

const StackDef& stack_at(const StackDef& stack, const Location& d) {
  const StackDef* cur = &stack;
  for (auto it = d.rbegin(); it != d.rend(); ++it) {
    if (cur->is_link() || *it < 0 ||
        *it >= static_cast<int>(cur->substacks().size())) {
      throw Error("no-such-location", "no substack at " + location_to_string(d));
    }
    cur = &cur->substacks()[*it];
  }
  return *cur;
}

namespace {

void collect_locations(const StackDef& s, const Location& d,
                       std::vector<std::pair<Location, const StackDef*>>& out) {
  out.emplace_back(d, &s);
  if (s.is_link()) return;
  for (int i = 0; i < static_cast<int>(s.substacks().size()); ++i)
    collect_locations(s.substacks()[i], child_location(i, d), out);
}

}  // namespace

std::vector<std::pair<Location, const StackDef*>> stack_locations(const StackDef& stack) {
  std::vector<std::pair<Location, const StackDef*>> out;
  collect_locations(stack, {}, out);
  return out;
}

HandlerOutput invoke(const ComponentDef& component, Orientation trigger, NodeId n,
                     const Value& state, const ChildRequest& arg) {
  switch (trigger) {
    case Orientation::Request:
      return component.on_request(n, state, arg.event);
    case Orientation::Indication:
      return component.on_indication(n, state, arg.child, arg.event);
    case Orientation::Periodic:
      return component.on_periodic(n, state);
  }
  throw Error("eval", "bad trigger");
}

}  // namespace tlc
