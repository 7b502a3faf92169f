#include "tlc/eval.hpp"

#include <algorithm>

#include "tlc/error.hpp"

namespace tlc {

namespace {

using K = Assertion::Kind;

Value location_value(const Location& d) {
  Value::List items;
  for (int i : d) items.push_back(Value::integer(i));
  return Value::sequence(std::move(items));
}

void harvest(const Value& v, std::set<Value>& out) {
  if (!out.insert(v).second) return;
  switch (v.kind()) {
    case Value::Kind::Tuple:
    case Value::Kind::Sequence:
    case Value::Kind::Set:
      for (const auto& x : v.items()) harvest(x, out);
      break;
    case Value::Kind::Map:
      for (const auto& [key, val] : v.entries()) {
        harvest(key, out);
        harvest(val, out);
      }
      break;
    default:
      break;
  }
}

class Evaluator {
 public:
  Evaluator(std::vector<const EventLabel*> labels, EvalContext& ctx)
      : labels_(std::move(labels)), ctx_(ctx) {}

  std::vector<Verdict> run(const APtr& a) {
    switch (a->kind) {
      case K::TrueLit:
        return fill(Verdict::True);
      case K::FalseLit:
        return fill(Verdict::False);
      case K::Atom:
        return pointwise([&](std::size_t i) {
          return atom_holds(*a, i) ? Verdict::True : Verdict::False;
        });
      case K::Correct:
        return pointwise([&](std::size_t i) {
          NodeId n = term(a->terms[0], i).as_node();
          return ctx_.correct.count(n) ? Verdict::True : Verdict::False;
        });
      case K::Under:
        return pointwise([&](std::size_t i) {
          return extends(labels_[i]->d, a->guard_loc) ? Verdict::True : Verdict::False;
        });
      case K::IsFail:
        return pointwise([&](std::size_t i) {
          return labels_[i]->is_fail() ? Verdict::True : Verdict::False;
        });
      case K::EventAtom:
        return pointwise([&](std::size_t i) {
          return event_atom_holds(*a, i) ? Verdict::True : Verdict::False;
        });
      case K::SelfSugar:
        return pointwise([&](std::size_t i) {
          return mself(*labels_[i]) ? Verdict::True : Verdict::False;
        });
      case K::And:
        return zip(run(a->a), run(a->b), verdict_and);
      case K::Or:
        return zip(run(a->a), run(a->b), verdict_or);
      case K::Not: {
        auto v = run(a->a);
        for (auto& x : v) x = verdict_not(x);
        return v;
      }
      case K::Implies: {
        auto lhs = run(a->a);
        auto rhs = run(a->b);
        return zip(lhs, rhs, [](Verdict l, Verdict r) { return verdict_or(verdict_not(l), r); });
      }
      case K::Forall:
        return quantify(*a, /*universal=*/true);
      case K::Exists:
        return quantify(*a, /*universal=*/false);
      case K::AlwaysS: {
        auto child = run(a->a);
        std::vector<Verdict> out(size(), Verdict::True);
        Verdict acc = Verdict::True;  // vacuously true at the last position
        for (std::size_t i = size(); i-- > 0;) {
          out[i] = acc;
          acc = verdict_and(acc, child[i]);
        }
        return out;
      }
      case K::PastAlwaysS: {
        auto child = run(a->a);
        std::vector<Verdict> out(size(), Verdict::True);
        Verdict acc = Verdict::True;
        for (std::size_t i = 0; i < size(); ++i) {
          out[i] = acc;
          acc = verdict_and(acc, child[i]);
        }
        return out;
      }
      case K::EventuallyS: {
        auto child = run(a->a);
        std::vector<Verdict> out(size(), Verdict::False);
        Verdict acc = Verdict::False;
        for (std::size_t i = size(); i-- > 0;) {
          out[i] = acc;
          acc = verdict_or(acc, child[i]);
        }
        if (!ctx_.closed_world) {
          // No witness on an open prefix is inconclusive, not false.
          for (auto& v : out)
            if (v == Verdict::False) v = Verdict::Unknown;
        }
        return out;
      }
      case K::PastEventuallyS: {
        auto child = run(a->a);
        std::vector<Verdict> out(size(), Verdict::False);
        Verdict acc = Verdict::False;
        for (std::size_t i = 0; i < size(); ++i) {
          out[i] = acc;
          acc = verdict_or(acc, child[i]);
        }
        return out;
      }
      case K::Always:
        return always_from(run(a->a));
      case K::PastAlways: {
        auto child = run(a->a);
        std::vector<Verdict> out(size(), Verdict::True);
        Verdict acc = Verdict::True;
        for (std::size_t i = 0; i < size(); ++i) {
          acc = verdict_and(acc, child[i]);
          out[i] = acc;
        }
        return out;
      }
      case K::Eventually:
        return eventually_from(run(a->a));
      case K::PastEventually: {
        auto child = run(a->a);
        std::vector<Verdict> out(size(), Verdict::False);
        Verdict acc = Verdict::False;
        for (std::size_t i = 0; i < size(); ++i) {
          acc = verdict_or(acc, child[i]);
          out[i] = acc;
        }
        return out;
      }
      case K::Next: {
        auto child = run(a->a);
        std::vector<Verdict> out(size(), ctx_.closed_world ? Verdict::False : Verdict::Unknown);
        for (std::size_t i = 0; i + 1 < size(); ++i) out[i] = child[i + 1];
        return out;
      }
      case K::SelfOp: {
        std::vector<const EventLabel*> view;
        std::vector<std::size_t> map(size());
        for (std::size_t i = 0; i < size(); ++i) {
          map[i] = view.size();
          if (mself(*labels_[i])) view.push_back(labels_[i]);
        }
        Evaluator sub(std::move(view), ctx_);
        auto inner = sub.run(a->a);
        std::vector<Verdict> out(size(), Verdict::Unknown);
        for (std::size_t i = 0; i < size(); ++i) {
          if (map[i] < inner.size())
            out[i] = inner[map[i]];
          else
            out[i] = ctx_.closed_world ? Verdict::False : Verdict::Unknown;
        }
        return out;
      }
      case K::StrongImplies: {
        auto lhs = run(a->a);
        auto rhs = run(a->b);
        return always_from(
            zip(lhs, rhs, [](Verdict l, Verdict r) { return verdict_or(verdict_not(l), r); }));
      }
      case K::LeadsTo: {
        auto lhs = run(a->a);
        auto rhs = eventually_from(run(a->b));
        return always_from(
            zip(lhs, rhs, [](Verdict l, Verdict r) { return verdict_or(verdict_not(l), r); }));
      }
      case K::PrecededBy: {
        auto lhs = run(a->a);
        auto child = run(a->b);
        std::vector<Verdict> past(size(), Verdict::False);
        Verdict acc = Verdict::False;
        for (std::size_t i = 0; i < size(); ++i) {
          acc = verdict_or(acc, child[i]);
          past[i] = acc;
        }
        return always_from(
            zip(lhs, past, [](Verdict l, Verdict r) { return verdict_or(verdict_not(l), r); }));
      }
    }
    throw Error("eval", "unreachable assertion kind");
  }

  // Non-strict always: meet over the positions from i on.
  std::vector<Verdict> always_from(std::vector<Verdict> child) {
    Verdict acc = Verdict::True;
    for (std::size_t i = child.size(); i-- > 0;) {
      acc = verdict_and(acc, child[i]);
      child[i] = acc;
    }
    return child;
  }

  // Non-strict eventually: join from i on; without a witness an open prefix
  // stays inconclusive.
  std::vector<Verdict> eventually_from(std::vector<Verdict> child) {
    Verdict acc = Verdict::False;
    for (std::size_t i = child.size(); i-- > 0;) {
      acc = verdict_or(acc, child[i]);
      child[i] = acc;
    }
    if (!ctx_.closed_world) {
      for (auto& v : child)
        if (v == Verdict::False) v = Verdict::Unknown;
    }
    return child;
  }

  Value term(const TermPtr& t, std::size_t i) {
    switch (t->kind) {
      case Term::Kind::Rigid: {
        auto it = ctx_.bindings.find(t->name);
        if (it == ctx_.bindings.end()) throw Error("eval", "unbound rigid " + t->name);
        return it->second;
      }
      case Term::Kind::Flexible:
        return flexible(t->flex, i);
      case Term::Kind::ConstVal:
        return t->value;
      case Term::Kind::CorrectSet: {
        Value::List xs;
        for (NodeId n : ctx_.correct) xs.push_back(Value::node(n));
        return Value::set(std::move(xs));
      }
      case Term::Kind::NodeSet: {
        Value::List xs;
        for (NodeId n : ctx_.node_universe) xs.push_back(Value::node(n));
        return Value::set(std::move(xs));
      }
      case Term::Kind::FuncApp:
        return func(*t, i);
      case Term::Kind::VarApp: {
        Value base = t->var_is_flex ? flexible(t->flex, i) : term(Term::rigid(t->name), i);
        if (t->args.size() != 1) throw Error("eval", "variable application expects one argument");
        Value key = term(t->args[0], i);
        auto v = base.get(key);
        if (!v) throw Error("eval", "no entry for " + key.to_string());
        return *v;
      }
    }
    throw Error("eval", "unreachable term kind");
  }

 private:
  std::size_t size() const { return labels_.size(); }

  std::vector<Verdict> fill(Verdict v) { return std::vector<Verdict>(size(), v); }

  template <typename F>
  std::vector<Verdict> pointwise(F f) {
    std::vector<Verdict> out(size(), Verdict::False);
    for (std::size_t i = 0; i < size(); ++i) out[i] = f(i);
    return out;
  }

  template <typename F>
  static std::vector<Verdict> zip(const std::vector<Verdict>& a, const std::vector<Verdict>& b,
                                  F f) {
    std::vector<Verdict> out(a.size(), Verdict::False);
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = f(a[i], b[i]);
    return out;
  }

  Value flexible(Flex f, std::size_t i) {
    const EventLabel& l = *labels_[i];
    switch (f) {
      case Flex::N:
        return Value::node(l.n);
      case Flex::R:
        return Value::integer(l.r);
      case Flex::D:
        return location_value(l.d);
      case Flex::O:
        return l.o ? Value::string(orientation_name(*l.o)) : Value::bottom();
      case Flex::E:
        return l.is_fail() ? Value::bottom() : l.fe.event->to_value();
      case Flex::Ors: {
        Value::List xs;
        for (const auto& o : l.ors) xs.push_back(o.to_value());
        return Value::sequence(std::move(xs));
      }
      case Flex::Ois: {
        Value::List xs;
        for (const auto& e : l.ois) xs.push_back(e.to_value());
        return Value::sequence(std::move(xs));
      }
      case Flex::S:
      case Flex::SPost: {
        if (l.is_fail()) throw Error("eval", "state read on a fail label");
        const DistState& s = f == Flex::S ? l.s : l.s_post;
        Value::Entries es;
        for (NodeId n = 0; n < static_cast<NodeId>(s.size()); ++n)
          es.emplace_back(Value::node(n), s[n]);
        return Value::map(std::move(es));
      }
    }
    throw Error("eval", "unreachable flexible");
  }

  Value func(const Term& t, std::size_t i) {
    std::vector<Value> args;
    args.reserve(t.args.size());
    for (const auto& a : t.args) args.push_back(term(a, i));
    const std::string& f = t.name;
    if (f == "tuple") return Value::tuple(std::move(args));
    if (f == "seq") return Value::sequence(std::move(args));
    if (f == "setof") return Value::set(std::move(args));
    if (f == "union") return args.at(0).set_union(args.at(1));
    if (f == "inter") return args.at(0).set_intersect(args.at(1));
    if (f == "size") return Value::integer(static_cast<std::int64_t>(args.at(0).size()));
    if (f == "plus") return Value::integer(args.at(0).as_int() + args.at(1).as_int());
    if (f == "times") return Value::integer(args.at(0).as_int() * args.at(1).as_int());
    if (f == "cons") {
      Value::List xs = {args.at(0)};
      for (const auto& x : args.at(1).items()) xs.push_back(x);
      return Value::sequence(std::move(xs));
    }
    if (f == "occ") {
      std::int64_t count = 0;
      for (const auto& x : args.at(0).items())
        if (x == args.at(1)) ++count;
      return Value::integer(count);
    }
    auto it = ctx_.projections.find(f);
    if (it != ctx_.projections.end()) return it->second(args.at(0));
    throw Error("eval", "unknown function " + f);
  }

  bool atom_holds(const Assertion& a, std::size_t i) {
    Value lhs = term(a.terms[0], i);
    Value rhs = term(a.terms[1], i);
    switch (a.pred) {
      case Assertion::Pred::Eq:
        return lhs == rhs;
      case Assertion::Pred::Lt:
        return lhs < rhs;
      case Assertion::Pred::Le:
        return lhs < rhs || lhs == rhs;
      case Assertion::Pred::In:
        if (rhs.kind() == Value::Kind::Map) return rhs.has_key(lhs);
        return rhs.contains(lhs);
      case Assertion::Pred::Subset:
        return lhs.subset_of(rhs);
    }
    return false;
  }

  bool event_atom_holds(const Assertion& a, std::size_t i) {
    const EventLabel& l = *labels_[i];
    if (l.is_fail() || l.o != a.orient || l.d != a.loc) return false;
    const UserEvent& e = *l.fe.event;
    if (e.kind != a.event_kind || e.args.size() != a.args.size()) return false;
    if (term(a.node_term, i) != Value::node(l.n)) return false;
    for (std::size_t k = 0; k < a.args.size(); ++k)
      if (term(a.args[k], i) != e.args[k]) return false;
    return true;
  }

  // --- quantifier domains ---

  std::vector<Value> node_domain() {
    std::vector<Value> out;
    for (NodeId n : ctx_.node_universe) out.push_back(Value::node(n));
    return out;
  }

  // Collects the values the variable can match against the trace; false when
  // the body uses the variable in a way this analysis cannot bound.
  bool collect_relevant(const std::string& var, const APtr& a, std::set<Value>& out,
                        std::set<std::string>& linked) {
    if (!a) return true;
    switch (a->kind) {
      case K::EventAtom: {
        if (term_mentions(a->node_term, var)) return false;
        for (std::size_t k = 0; k < a->args.size(); ++k) {
          const TermPtr& arg = a->args[k];
          if (arg->kind == Term::Kind::Rigid && arg->name == var) {
            for (const auto* l : labels_) {
              if (l->is_fail() || l->fe.event->kind != a->event_kind) continue;
              if (k < l->fe.event->args.size()) out.insert(l->fe.event->args[k]);
            }
          } else if (term_mentions(arg, var)) {
            return false;
          }
        }
        return true;
      }
      case K::Atom: {
        const TermPtr& lhs = a->terms[0];
        const TermPtr& rhs = a->terms[1];
        bool l = lhs->kind == Term::Kind::Rigid && lhs->name == var;
        bool r = rhs->kind == Term::Kind::Rigid && rhs->name == var;
        if (!l && !r) return !term_mentions(lhs, var) && !term_mentions(rhs, var);
        if (a->pred == Assertion::Pred::In || a->pred == Assertion::Pred::Subset) return false;
        const TermPtr& other = l ? rhs : lhs;
        switch (other->kind) {
          case Term::Kind::ConstVal:
            out.insert(other->value);
            return true;
          case Term::Kind::Rigid:
            linked.insert(other->name);
            return true;
          case Term::Kind::Flexible:
            for (std::size_t i = 0; i < size(); ++i) {
              if ((other->flex == Flex::S || other->flex == Flex::SPost) && labels_[i]->is_fail())
                continue;
              out.insert(flexible(other->flex, i));
            }
            return true;
          default:
            return false;
        }
      }
      case K::Correct:
        return !term_mentions(a->terms[0], var);
      default:
        break;
    }
    for (const auto& t : a->terms)
      if (term_mentions(t, var)) return false;
    if (term_mentions(a->node_term, var)) return false;
    for (const auto& t : a->args)
      if (term_mentions(t, var)) return false;
    if ((a->kind == K::Forall || a->kind == K::Exists) && a->var == var) return true;  // shadowed
    return collect_relevant(var, a->a, out, linked) && collect_relevant(var, a->b, out, linked);
  }

  static bool term_mentions(const TermPtr& t, const std::string& var) {
    if (!t) return false;
    if ((t->kind == Term::Kind::Rigid || t->kind == Term::Kind::VarApp) && t->name == var)
      return true;
    for (const auto& a : t->args)
      if (term_mentions(a, var)) return true;
    return false;
  }

  std::vector<Value> value_domain(const Assertion& q) {
    if (!ctx_.narrow_domains) return ctx_.value_universe;
    std::set<Value> relevant;
    std::set<std::string> seen = {q.var};
    std::vector<std::string> frontier = {q.var};
    // Close over =/</<= links between rigids so equated variables share
    // candidate values.
    while (!frontier.empty()) {
      std::string var = frontier.back();
      frontier.pop_back();
      std::set<std::string> linked;
      if (!collect_relevant(var, q.a, relevant, linked)) return ctx_.value_universe;
      for (const auto& name : linked)
        if (seen.insert(name).second) frontier.push_back(name);
    }
    std::vector<Value> out(relevant.begin(), relevant.end());
    // Two representatives for values outside the relevant set: one private
    // to this variable and one shared by all narrowed variables, so that
    // cross-variable equalities over irrelevant values keep both an equal
    // and a distinct instantiation.
    out.push_back(Value::string(std::string("\x01fresh:") + q.var));
    out.push_back(Value::string("\x01fresh:shared"));
    return out;
  }

  std::vector<Verdict> quantify(const Assertion& q, bool universal) {
    std::vector<Value> domain =
        q.sort == Sort::NodeSort ? node_domain() : value_domain(q);
    std::vector<Verdict> acc(size(), universal ? Verdict::True : Verdict::False);
    auto old = ctx_.bindings.find(q.var);
    std::optional<Value> saved;
    if (old != ctx_.bindings.end()) saved = old->second;
    for (const auto& v : domain) {
      ctx_.bindings[q.var] = v;
      auto child = run(q.a);
      for (std::size_t i = 0; i < size(); ++i)
        acc[i] = universal ? verdict_and(acc[i], child[i]) : verdict_or(acc[i], child[i]);
    }
    if (saved)
      ctx_.bindings[q.var] = *saved;
    else
      ctx_.bindings.erase(q.var);
    return acc;
  }

  std::vector<const EventLabel*> labels_;
  EvalContext& ctx_;
};

std::vector<const EventLabel*> label_view(const Trace& trace) {
  std::vector<const EventLabel*> view;
  view.reserve(trace.labels.size());
  for (const auto& l : trace.labels) view.push_back(&l);
  return view;
}

}  // namespace

EvalContext context_for_trace(const Trace& trace) {
  EvalContext ctx;
  for (NodeId n = 0; n < trace.header.nodes; ++n) ctx.node_universe.push_back(n);
  for (NodeId n : trace.header.correct_nodes()) ctx.correct.insert(n);
  std::set<Value> values;
  for (const auto& l : trace.labels) {
    values.insert(Value::integer(l.r));
    values.insert(Value::node(l.n));
    if (!l.is_fail()) {
      harvest(l.fe.event->to_value(), values);
    }
    for (const auto& o : l.ors) harvest(o.to_value(), values);
    for (const auto& e : l.ois) harvest(e.to_value(), values);
  }
  ctx.value_universe.assign(values.begin(), values.end());
  return ctx;
}

Value eval_term(const TermPtr& t, const Trace& trace, std::size_t i, const EvalContext& ctx) {
  if (i >= trace.labels.size()) throw Error("eval", "position out of range");
  EvalContext local = ctx;
  Evaluator ev(label_view(trace), local);
  return ev.term(t, i);
}

SelfProjection self_projection(const Trace& trace) {
  SelfProjection out;
  out.trace.header = trace.header;
  out.position_map.resize(trace.labels.size());
  for (std::size_t i = 0; i < trace.labels.size(); ++i) {
    out.position_map[i] = out.trace.labels.size();
    if (mself(trace.labels[i])) out.trace.labels.push_back(trace.labels[i]);
  }
  return out;
}

Verdict eval(const APtr& a, const Trace& trace, std::size_t i, const EvalContext& ctx) {
  if (trace.labels.empty()) throw Error("eval", "empty trace");
  if (i >= trace.labels.size()) throw Error("eval", "position out of range");
  EvalContext local = ctx;
  Evaluator ev(label_view(trace), local);
  return ev.run(a)[i];
}

namespace {

APtr close_rigids(const APtr& a, const EvalContext& ctx) {
  APtr closed = a;
  auto rigids = free_rigids(a);
  for (auto it = rigids.rbegin(); it != rigids.rend(); ++it) {
    if (ctx.bindings.count(it->first)) continue;
    closed = Assertion::quantifier(K::Forall, it->first, it->second, closed);
  }
  return closed;
}

}  // namespace

Verdict check(const APtr& a, const Trace& trace, const EvalContext& ctx) {
  return eval(close_rigids(a, ctx), trace, 0, ctx);
}

namespace {

// Earliest position where the body under the leading always-operators goes
// false, for counterexample reporting.
std::optional<std::size_t> violation_position(const APtr& a, const Trace& trace,
                                              const EvalContext& ctx) {
  APtr body = a;
  while (body) {
    if (body->kind == K::Always || body->kind == K::AlwaysS) {
      body = body->a;
    } else if (body->kind == K::StrongImplies) {
      body = Assertion::make(K::Implies, body->a, body->b);
    } else if (body->kind == K::LeadsTo) {
      body = Assertion::make(K::Implies, body->a, Assertion::make(K::Eventually, body->b));
    } else if (body->kind == K::PrecededBy) {
      body = Assertion::make(K::Implies, body->a, Assertion::make(K::PastEventually, body->b));
    } else {
      break;
    }
  }
  for (std::size_t i = 0; i < trace.labels.size(); ++i) {
    if (eval(body, trace, i, ctx) == Verdict::False) return i;
  }
  return std::nullopt;
}

}  // namespace

CheckReport check_report(const std::string& name, const APtr& a, const Trace& trace,
                         const EvalContext& ctx) {
  CheckReport report;
  report.name = name;
  report.verdict = check(a, trace, ctx);
  if (report.verdict != Verdict::False) return report;

  // Search the rigid closure for a falsifying instantiation, then locate the
  // earliest violating position under it.
  APtr closed = close_rigids(a, ctx);
  std::vector<std::pair<std::string, Sort>> vars;
  APtr body = closed;
  while (body->kind == K::Forall) {
    vars.emplace_back(body->var, body->sort);
    body = body->a;
  }
  EvalContext local = ctx;
  std::function<bool(std::size_t)> descend = [&](std::size_t k) -> bool {
    if (k == vars.size()) return eval(body, trace, 0, local) == Verdict::False;
    std::vector<Value> domain;
    if (vars[k].second == Sort::NodeSort) {
      for (NodeId n : local.node_universe) domain.push_back(Value::node(n));
    } else {
      domain = local.value_universe;
    }
    for (const auto& v : domain) {
      local.bindings[vars[k].first] = v;
      if (descend(k + 1)) return true;
    }
    local.bindings.erase(vars[k].first);
    return false;
  };
  if (descend(0)) {
    for (const auto& [var, sort] : vars) {
      auto it = local.bindings.find(var);
      if (it != local.bindings.end()) report.witness.emplace(var, it->second);
    }
    report.violation_position = violation_position(body, trace, local);
    if (!report.violation_position) report.violation_position = 0;
  } else {
    report.violation_position = violation_position(closed, trace, local);
  }
  return report;
}

}  // namespace tlc
