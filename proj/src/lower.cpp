#include "tlc/lower.hpp"

#include "tlc/error.hpp"

namespace tlc {

namespace {

using K = Assertion::Kind;
using A = Assertion;

bool term_is_flexible_free(const TermPtr& t) {
  if (!t) return true;
  if (t->kind == Term::Kind::Flexible) return false;
  if (t->kind == Term::Kind::VarApp && t->var_is_flex) return false;
  for (const auto& arg : t->args)
    if (!term_is_flexible_free(arg)) return false;
  return true;
}

// Unfolds the arrow combinators so the rewrite only sees boxed implications.
APtr expand_arrows(const APtr& a) {
  if (!a) return a;
  switch (a->kind) {
    case K::StrongImplies:
      return A::make(K::Always,
                     A::make(K::Implies, expand_arrows(a->a), expand_arrows(a->b)));
    case K::LeadsTo:
      return A::make(K::Always,
                     A::make(K::Implies, expand_arrows(a->a),
                             A::make(K::Eventually, expand_arrows(a->b))));
    case K::PrecededBy:
      return A::make(K::Always,
                     A::make(K::Implies, expand_arrows(a->a),
                             A::make(K::PastEventually, expand_arrows(a->b))));
    case K::Forall:
    case K::Exists:
      return A::quantifier(a->kind, a->var, a->sort, expand_arrows(a->a));
    case K::And:
    case K::Or:
    case K::Implies:
      return A::make(a->kind, expand_arrows(a->a), expand_arrows(a->b));
    case K::Not:
    case K::Always:
    case K::PastAlways:
    case K::AlwaysS:
    case K::PastAlwaysS:
    case K::Eventually:
    case K::PastEventually:
    case K::EventuallyS:
    case K::PastEventuallyS:
    case K::Next:
    case K::SelfOp:
      return a->b ? A::make(a->kind, expand_arrows(a->a), expand_arrows(a->b))
                  : A::make(a->kind, expand_arrows(a->a));
    default:
      return a;
  }
}

// Inside a box: the Fig-8 body sublanguage.
void validate_body(const APtr& a, const Location& level) {
  switch (a->kind) {
    case K::EventAtom:
      if (!extends(a->loc, level))
        throw Error("atom-shape", "event atom location " + location_to_string(a->loc) +
                                      " does not extend " + location_to_string(level) + " in " +
                                      print_assertion(a));
      if (!term_is_flexible_free(a->node_term))
        throw Error("atom-shape", "event atom node term must be rigid: " + print_assertion(a));
      for (const auto& arg : a->args)
        if (!term_is_flexible_free(arg))
          throw Error("atom-shape", "event atom argument reads a flexible variable: " +
                                        print_assertion(a));
      return;
    case K::Correct:
    case K::TrueLit:
    case K::FalseLit:
      return;
    case K::Atom:
      for (const auto& t : a->terms)
        if (!term_is_flexible_free(t))
          throw Error("atom-shape",
                      "atom reads a flexible variable outside an event atom: " +
                          print_assertion(a));
      return;
    case K::Under:
    case K::IsFail:
    case K::SelfSugar:
      throw Error("atom-shape", "atom not in the invariant sublanguage: " + print_assertion(a));
    case K::Next:
      throw Error("forbidden-operator", "next is not allowed in invariants");
    case K::SelfOp:
      throw Error("forbidden-operator", "the self operator is not allowed in invariants");
    case K::Forall:
    case K::Exists:
      validate_body(a->a, level);
      return;
    case K::And:
    case K::Or:
    case K::Implies:
      validate_body(a->a, level);
      validate_body(a->b, level);
      return;
    case K::Not:
    case K::Always:
    case K::PastAlways:
    case K::AlwaysS:
    case K::PastAlwaysS:
    case K::Eventually:
    case K::PastEventually:
    case K::EventuallyS:
    case K::PastEventuallyS:
      validate_body(a->a, level);
      return;
    case K::StrongImplies:
    case K::LeadsTo:
    case K::PrecededBy:
      // expand_arrows runs first; defensive only.
      validate_body(expand_arrows(a), level);
      return;
  }
}

bool flexible_free_formula(const APtr& a) {
  if (!a) return true;
  switch (a->kind) {
    case K::Correct:
    case K::TrueLit:
    case K::FalseLit:
      return true;
    case K::Atom:
      for (const auto& t : a->terms)
        if (!term_is_flexible_free(t)) return false;
      return true;
    case K::And:
    case K::Or:
    case K::Implies:
    case K::Not:
    case K::Forall:
    case K::Exists:
      return flexible_free_formula(a->a) && flexible_free_formula(a->b);
    default:
      return false;
  }
}

// Top structure: boxes, or propositional combinations of boxes and
// flexible-free facts (position-independent, so sound to keep unboxed).
void validate_top(const APtr& a, const Location& level) {
  switch (a->kind) {
    case K::Always:
    case K::AlwaysS:
    case K::PastAlways:
    case K::PastAlwaysS:
      validate_body(a->a, level);
      return;
    case K::And:
    case K::Or:
    case K::Implies:
      validate_top(a->a, level);
      validate_top(a->b, level);
      return;
    case K::Not:
      validate_top(a->a, level);
      return;
    case K::Forall:
    case K::Exists:
      validate_top(a->a, level);
      return;
    case K::Next:
      throw Error("forbidden-operator", "next is not allowed in invariants");
    case K::SelfOp:
      throw Error("forbidden-operator", "the self operator is not allowed in invariants");
    default:
      if (flexible_free_formula(a)) return;
      throw Error("not-boxed",
                  "assertion reads trace events outside an always: " + print_assertion(a));
  }
}

Location pushed_location(int i, const Location& d) {
  Location out = d;
  out.push_back(i);  // the whole stack moves under branch i
  return out;
}

}  // namespace

InvariantSpec validate_invariant(const APtr& a, const Location& d) {
  APtr expanded = expand_arrows(a);
  validate_top(expanded, d);
  return InvariantSpec{expanded, d};
}

APtr push(int i, const APtr& a) {
  if (!a) return a;
  switch (a->kind) {
    case K::EventAtom:
      return A::event_atom(a->node_term, pushed_location(i, a->loc), a->orient, a->event_kind,
                           a->args);
    case K::Correct:
    case K::Atom:
    case K::TrueLit:
    case K::FalseLit:
      return a;
    case K::Forall:
    case K::Exists:
      return A::quantifier(a->kind, a->var, a->sort, push(i, a->a));
    default: {
      APtr l = push(i, a->a);
      APtr r = push(i, a->b);
      auto out = std::make_shared<Assertion>(*a);
      out->a = l;
      out->b = r;
      return out;
    }
  }
}

APtr restrict_assertion(const APtr& guard, const APtr& a) {
  if (!a) return a;
  switch (a->kind) {
    case K::Always:
    case K::PastAlways:
    case K::AlwaysS:
    case K::PastAlwaysS: {
      // An eventuality directly under the box soaks up interleaving on its
      // own; guarding it would only weaken the lowered form.
      if (a->a && is_future_eventually(a->a->kind)) {
        return A::make(a->kind,
                       A::make(a->a->kind, restrict_assertion(guard, a->a->a)));
      }
      return A::make(a->kind, A::make(K::Implies, guard, restrict_assertion(guard, a->a)));
    }
    case K::Eventually:
    case K::PastEventually:
    case K::EventuallyS:
    case K::PastEventuallyS:
      return A::make(a->kind, restrict_assertion(guard, a->a));
    case K::And:
    case K::Or:
    case K::Implies:
      return A::make(a->kind, restrict_assertion(guard, a->a), restrict_assertion(guard, a->b));
    case K::Not:
      return A::make(K::Not, restrict_assertion(guard, a->a));
    case K::Forall:
    case K::Exists:
      return A::quantifier(a->kind, a->var, a->sort, restrict_assertion(guard, a->a));
    default:
      return a;  // atoms unchanged
  }
}

namespace {

bool antecedent_pins_location(const APtr& a, const Location& guard) {
  if (!a) return false;
  if (a->kind == K::EventAtom) return extends(a->loc, guard);
  if (a->kind == K::And)
    return antecedent_pins_location(a->a, guard) || antecedent_pins_location(a->b, guard);
  return false;
}

}  // namespace

APtr simplify_guard(const APtr& a) {
  if (!a) return a;
  if (a->kind == K::Implies && a->a && a->a->kind == K::Under) {
    APtr consequent = simplify_guard(a->b);
    if (consequent->kind == K::Implies &&
        antecedent_pins_location(consequent->a, a->a->guard_loc)) {
      return consequent;
    }
    return A::make(K::Implies, a->a, consequent);
  }
  switch (a->kind) {
    case K::Forall:
    case K::Exists:
      return A::quantifier(a->kind, a->var, a->sort, simplify_guard(a->a));
    case K::EventAtom:
    case K::Atom:
    case K::Correct:
    case K::Under:
    case K::IsFail:
    case K::TrueLit:
    case K::FalseLit:
    case K::SelfSugar:
      return a;
    default: {
      auto out = std::make_shared<Assertion>(*a);
      out->a = simplify_guard(a->a);
      out->b = simplify_guard(a->b);
      return out;
    }
  }
}

LowerResult lower_steps(int i, const InvariantSpec& spec) {
  if (!spec.declared_level.empty())
    throw Error("level-mismatch", "lowering is defined for top-level invariants only");
  LowerResult result;
  result.expanded = spec.body;
  result.pushed = push(i, spec.body);
  result.restricted = restrict_assertion(A::under({i}), result.pushed);
  result.lowered = simplify_guard(result.restricted);
  return result;
}

APtr lower(int i, const InvariantSpec& spec) { return lower_steps(i, spec).lowered; }

APtr un_push(int i, const APtr& a) {
  if (!a) return a;
  switch (a->kind) {
    case K::EventAtom: {
      Location d = a->loc;
      if (d.empty() || d.back() != i)
        throw Error("validation", "location was not pushed under " + std::to_string(i));
      d.pop_back();
      return A::event_atom(a->node_term, d, a->orient, a->event_kind, a->args);
    }
    case K::Correct:
    case K::Atom:
    case K::TrueLit:
    case K::FalseLit:
      return a;
    case K::Forall:
    case K::Exists:
      return A::quantifier(a->kind, a->var, a->sort, un_push(i, a->a));
    default: {
      auto out = std::make_shared<Assertion>(*a);
      out->a = un_push(i, a->a);
      out->b = un_push(i, a->b);
      return out;
    }
  }
}

}  // namespace tlc
