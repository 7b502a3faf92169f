#include "tlc/assertion.hpp"

#include <algorithm>
#include <map>

#include "tlc/error.hpp"

namespace tlc {

Verdict verdict_and(Verdict a, Verdict b) { return a < b ? a : b; }
Verdict verdict_or(Verdict a, Verdict b) { return a > b ? a : b; }
Verdict verdict_not(Verdict v) {
  if (v == Verdict::True) return Verdict::False;
  if (v == Verdict::False) return Verdict::True;
  return Verdict::Unknown;
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::True:
      return "True";
    case Verdict::False:
      return "False";
    case Verdict::Unknown:
      return "Unknown";
  }
  return "?";
}

TermPtr Term::rigid(std::string name) {
  auto t = std::make_shared<Term>();
  t->kind = Kind::Rigid;
  t->name = std::move(name);
  return t;
}

TermPtr Term::flexible(Flex f) {
  auto t = std::make_shared<Term>();
  t->kind = Kind::Flexible;
  t->flex = f;
  return t;
}

TermPtr Term::constant(Value v) {
  auto t = std::make_shared<Term>();
  t->kind = Kind::ConstVal;
  t->value = std::move(v);
  return t;
}

TermPtr Term::correct_set() {
  auto t = std::make_shared<Term>();
  t->kind = Kind::CorrectSet;
  return t;
}

TermPtr Term::node_set() {
  auto t = std::make_shared<Term>();
  t->kind = Kind::NodeSet;
  return t;
}

TermPtr Term::func(std::string name, std::vector<TermPtr> args) {
  auto t = std::make_shared<Term>();
  t->kind = Kind::FuncApp;
  t->name = std::move(name);
  t->args = std::move(args);
  return t;
}

TermPtr Term::apply_rigid(std::string name, std::vector<TermPtr> args) {
  auto t = std::make_shared<Term>();
  t->kind = Kind::VarApp;
  t->name = std::move(name);
  t->args = std::move(args);
  return t;
}

TermPtr Term::apply_flex(Flex f, std::vector<TermPtr> args) {
  auto t = std::make_shared<Term>();
  t->kind = Kind::VarApp;
  t->var_is_flex = true;
  t->flex = f;
  t->args = std::move(args);
  return t;
}

APtr Assertion::atom(Pred p, TermPtr lhs, TermPtr rhs) {
  auto a = std::make_shared<Assertion>();
  a->kind = Kind::Atom;
  a->pred = p;
  a->terms = {std::move(lhs), std::move(rhs)};
  return a;
}

APtr Assertion::correct(TermPtr t) {
  auto a = std::make_shared<Assertion>();
  a->kind = Kind::Correct;
  a->terms = {std::move(t)};
  return a;
}

APtr Assertion::under(Location d) {
  auto a = std::make_shared<Assertion>();
  a->kind = Kind::Under;
  a->guard_loc = std::move(d);
  return a;
}

APtr Assertion::is_fail() {
  auto a = std::make_shared<Assertion>();
  a->kind = Kind::IsFail;
  return a;
}

APtr Assertion::event_atom(TermPtr node, Location d, Orientation o, std::string kind,
                           std::vector<TermPtr> args) {
  auto a = std::make_shared<Assertion>();
  a->kind = Kind::EventAtom;
  a->node_term = std::move(node);
  a->loc = std::move(d);
  a->orient = o;
  a->event_kind = std::move(kind);
  a->args = std::move(args);
  return a;
}

APtr Assertion::self_sugar() {
  auto a = std::make_shared<Assertion>();
  a->kind = Kind::SelfSugar;
  return a;
}

APtr Assertion::true_lit() {
  auto a = std::make_shared<Assertion>();
  a->kind = Kind::TrueLit;
  return a;
}

APtr Assertion::false_lit() {
  auto a = std::make_shared<Assertion>();
  a->kind = Kind::FalseLit;
  return a;
}

APtr Assertion::make(Kind k, APtr a, APtr b) {
  auto out = std::make_shared<Assertion>();
  out->kind = k;
  out->a = std::move(a);
  out->b = std::move(b);
  return out;
}

APtr Assertion::quantifier(Kind k, std::string var, Sort sort, APtr body) {
  auto out = std::make_shared<Assertion>();
  out->kind = k;
  out->var = std::move(var);
  out->sort = sort;
  out->a = std::move(body);
  return out;
}

bool is_always_class(Assertion::Kind k) {
  using K = Assertion::Kind;
  return k == K::Always || k == K::PastAlways || k == K::AlwaysS || k == K::PastAlwaysS;
}

bool is_eventually_class(Assertion::Kind k) {
  using K = Assertion::Kind;
  return k == K::Eventually || k == K::PastEventually || k == K::EventuallyS ||
         k == K::PastEventuallyS;
}

bool is_future_eventually(Assertion::Kind k) {
  using K = Assertion::Kind;
  return k == K::Eventually || k == K::EventuallyS;
}

namespace {

using K = Assertion::Kind;
using A = Assertion;

APtr not_(APtr x) { return A::make(K::Not, std::move(x)); }
APtr and_(APtr x, APtr y) { return A::make(K::And, std::move(x), std::move(y)); }

TermPtr orientation_const(Orientation o) {
  return Term::constant(Value::string(orientation_name(o)));
}

TermPtr location_const(const Location& d) {
  Value::List items;
  for (int i : d) items.push_back(Value::integer(i));
  return Term::constant(Value::sequence(std::move(items)));
}

// n = t and d = lit and o = lit and e = kind(args)
APtr desugar_event_atom(const Assertion& a) {
  APtr conj = A::atom(A::Pred::Eq, Term::flexible(Flex::N), a.node_term);
  conj = and_(conj, A::atom(A::Pred::Eq, Term::flexible(Flex::D), location_const(a.loc)));
  conj = and_(conj, A::atom(A::Pred::Eq, Term::flexible(Flex::O), orientation_const(a.orient)));
  std::vector<TermPtr> parts = {Term::constant(Value::string(a.event_kind)),
                                Term::func("tuple", a.args)};
  conj = and_(conj, A::atom(A::Pred::Eq, Term::flexible(Flex::E), Term::func("tuple", parts)));
  return conj;
}

// (d = [] and o = req) or (d = [] and o = per) or (|d| = 1 and o = ind)
APtr desugar_self() {
  auto empty = location_const({});
  auto d = Term::flexible(Flex::D);
  auto o = Term::flexible(Flex::O);
  APtr req = and_(A::atom(A::Pred::Eq, d, empty),
                  A::atom(A::Pred::Eq, o, orientation_const(Orientation::Request)));
  APtr per = and_(A::atom(A::Pred::Eq, d, empty),
                  A::atom(A::Pred::Eq, o, orientation_const(Orientation::Periodic)));
  APtr ind = and_(A::atom(A::Pred::Eq, Term::func("size", {d}), Term::constant(Value::integer(1))),
                  A::atom(A::Pred::Eq, o, orientation_const(Orientation::Indication)));
  return not_(and_(and_(not_(req), not_(per)), not_(ind)));
}

}  // namespace

APtr desugar(const APtr& a) {
  if (!a) return a;
  switch (a->kind) {
    case K::Atom:
    case K::Correct:
    case K::Under:
    case K::IsFail:
    case K::TrueLit:
    case K::FalseLit:
      return a;
    case K::EventAtom:
      return desugar_event_atom(*a);
    case K::SelfSugar:
      return desugar_self();
    case K::And:
      return and_(desugar(a->a), desugar(a->b));
    case K::Not:
      return not_(desugar(a->a));
    case K::Or:
      return not_(and_(not_(desugar(a->a)), not_(desugar(a->b))));
    case K::Implies:
      return not_(and_(desugar(a->a), not_(desugar(a->b))));
    case K::Forall:
      return A::quantifier(K::Forall, a->var, a->sort, desugar(a->a));
    case K::Exists:
      return not_(A::quantifier(K::Forall, a->var, a->sort, not_(desugar(a->a))));
    case K::AlwaysS:
    case K::PastAlwaysS:
    case K::EventuallyS:
    case K::PastEventuallyS:
    case K::Next:
    case K::SelfOp:
      return A::make(a->kind, desugar(a->a));
    case K::Always: {
      APtr x = desugar(a->a);
      return and_(x, A::make(K::AlwaysS, x));
    }
    case K::PastAlways: {
      APtr x = desugar(a->a);
      return and_(x, A::make(K::PastAlwaysS, x));
    }
    case K::Eventually: {
      APtr x = desugar(a->a);
      return not_(and_(not_(x), not_(A::make(K::EventuallyS, x))));
    }
    case K::PastEventually: {
      APtr x = desugar(a->a);
      return not_(and_(not_(x), not_(A::make(K::PastEventuallyS, x))));
    }
    case K::StrongImplies:
      return desugar(A::make(K::Always, A::make(K::Implies, a->a, a->b)));
    case K::LeadsTo:
      return desugar(A::make(K::Always, A::make(K::Implies, a->a, A::make(K::Eventually, a->b))));
    case K::PrecededBy:
      return desugar(
          A::make(K::Always, A::make(K::Implies, a->a, A::make(K::PastEventually, a->b))));
  }
  throw Error("eval", "unreachable assertion kind");
}

bool contains_future_eventuality(const APtr& a) {
  if (!a) return false;
  if (is_future_eventually(a->kind) || a->kind == K::LeadsTo) return true;
  return contains_future_eventuality(a->a) || contains_future_eventuality(a->b);
}

namespace {

void collect_term_rigids(const TermPtr& t, std::map<std::string, Sort>& out, bool node_pos) {
  if (!t) return;
  if (t->kind == Term::Kind::Rigid) {
    auto [it, inserted] = out.emplace(t->name, node_pos ? Sort::NodeSort : Sort::ValueSort);
    if (!inserted && node_pos) it->second = Sort::NodeSort;
    return;
  }
  if (t->kind == Term::Kind::VarApp && !t->var_is_flex)
    out.emplace(t->name, Sort::ValueSort);
  for (const auto& arg : t->args) collect_term_rigids(arg, out, false);
}

void collect_rigids(const APtr& a, std::map<std::string, Sort>& out,
                    std::set<std::string>& bound) {
  if (!a) return;
  switch (a->kind) {
    case K::Atom:
      for (const auto& t : a->terms) collect_term_rigids(t, out, false);
      break;
    case K::Correct:
      collect_term_rigids(a->terms[0], out, true);
      break;
    case K::EventAtom:
      collect_term_rigids(a->node_term, out, true);
      for (const auto& t : a->args) collect_term_rigids(t, out, false);
      break;
    case K::Forall:
    case K::Exists: {
      bool newly = bound.insert(a->var).second;
      collect_rigids(a->a, out, bound);
      if (newly) bound.erase(a->var);
      return;
    }
    default:
      break;
  }
  collect_rigids(a->a, out, bound);
  collect_rigids(a->b, out, bound);
  for (const auto& name : bound) out.erase(name);
}

}  // namespace

std::vector<std::pair<std::string, Sort>> free_rigids(const APtr& a) {
  std::map<std::string, Sort> found;
  std::set<std::string> bound;
  collect_rigids(a, found, bound);
  return {found.begin(), found.end()};
}

}  // namespace tlc
