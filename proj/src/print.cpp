#include <sstream>

#include "tlc/assertion.hpp"
#include "tlc/error.hpp"

namespace tlc {

namespace {

using K = Assertion::Kind;

const char* flex_name(Flex f) {
  switch (f) {
    case Flex::N:
      return "@n";
    case Flex::R:
      return "@r";
    case Flex::D:
      return "@d";
    case Flex::O:
      return "@o";
    case Flex::E:
      return "@e";
    case Flex::Ors:
      return "@ors";
    case Flex::Ois:
      return "@ois";
    case Flex::S:
      return "@s";
    case Flex::SPost:
      return "@s'";
  }
  return "@?";
}

std::string print_value_term(const Value& v) {
  switch (v.kind()) {
    case Value::Kind::Integer:
      return std::to_string(v.as_int());
    case Value::Kind::String: {
      const std::string& s = v.as_string();
      if (s == "req" || s == "ind" || s == "per") return s;
      return "\"" + s + "\"";
    }
    case Value::Kind::Node:
      return "#" + std::to_string(v.as_node());
    case Value::Kind::Bottom:
      return "bot";
    case Value::Kind::Unit:
      return "unit";
    case Value::Kind::Sequence: {
      std::ostringstream os;
      os << "[";
      bool first = true;
      for (const auto& x : v.items()) {
        if (!first) os << ", ";
        first = false;
        os << print_value_term(x);
      }
      os << "]";
      return os.str();
    }
    default:
      throw Error("parse", "value has no concrete syntax: " + v.to_string());
  }
}

std::string term_str(const TermPtr& t);

std::string args_str(const std::vector<TermPtr>& args) {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i > 0) os << ", ";
    os << term_str(args[i]);
  }
  os << ")";
  return os.str();
}

std::string term_str(const TermPtr& t) {
  switch (t->kind) {
    case Term::Kind::Rigid:
      return t->name;
    case Term::Kind::Flexible:
      return flex_name(t->flex);
    case Term::Kind::ConstVal:
      return print_value_term(t->value);
    case Term::Kind::CorrectSet:
      return "Correct";
    case Term::Kind::NodeSet:
      return "Nodes";
    case Term::Kind::FuncApp:
      if (t->name == "plus" && t->args.size() == 2)
        return term_str(t->args[0]) + " + " + term_str(t->args[1]);
      if (t->name == "times" && t->args.size() == 2)
        return term_str(t->args[0]) + " * " + term_str(t->args[1]);
      return t->name + args_str(t->args);
    case Term::Kind::VarApp:
      return (t->var_is_flex ? std::string(flex_name(t->flex)) : t->name) + args_str(t->args);
  }
  return "?";
}

// Precedence levels for printing: 0 quantifier, 1 arrows, 2 or, 3 and,
// 4 unary, 6 atoms. Event atoms report level 1 so they pick up parentheses
// inside any operator context.
int level_of(const Assertion& a) {
  switch (a.kind) {
    case K::Forall:
    case K::Exists:
      return 0;
    case K::Implies:
    case K::StrongImplies:
    case K::LeadsTo:
    case K::PrecededBy:
      return 1;
    case K::EventAtom:
      return 1;
    case K::Or:
      return 2;
    case K::And:
      return 3;
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
      return 4;
    default:
      return 6;
  }
}

const char* unary_name(K k) {
  switch (k) {
    case K::Not:
      return "not";
    case K::Always:
      return "always";
    case K::PastAlways:
      return "alwaysP";
    case K::AlwaysS:
      return "alwaysS";
    case K::PastAlwaysS:
      return "alwaysPS";
    case K::Eventually:
      return "eventually";
    case K::PastEventually:
      return "eventuallyP";
    case K::EventuallyS:
      return "eventuallyS";
    case K::PastEventuallyS:
      return "eventuallyPS";
    case K::Next:
      return "next";
    case K::SelfOp:
      return "onself";
    default:
      return "?";
  }
}

struct Resugared {
  K kind;
  APtr a, b;
};

// Folds always(A -> ...) back into the arrow sugar so lowered output prints
// in the =>> / ~~> / <~~ style.
std::optional<Resugared> resugar(const Assertion& node) {
  if (node.kind == K::StrongImplies || node.kind == K::LeadsTo || node.kind == K::PrecededBy)
    return Resugared{node.kind, node.a, node.b};
  if (node.kind != K::Always || !node.a || node.a->kind != K::Implies) return std::nullopt;
  const Assertion& imp = *node.a;
  if (imp.b && imp.b->kind == K::Eventually) return Resugared{K::LeadsTo, imp.a, imp.b->a};
  if (imp.b && imp.b->kind == K::PastEventually)
    return Resugared{K::PrecededBy, imp.a, imp.b->a};
  return Resugared{K::StrongImplies, imp.a, imp.b};
}

std::string fmt(const APtr& a, int context);

std::string fmt_at(const APtr& a, int context) {
  std::string s = fmt(a, context);
  return s;
}

std::string fmt(const APtr& a, int context) {
  const Assertion& node = *a;
  int level = level_of(node);
  std::string body;
  switch (node.kind) {
    case K::Atom: {
      const char* op = nullptr;
      switch (node.pred) {
        case Assertion::Pred::Eq:
          op = "=";
          break;
        case Assertion::Pred::Lt:
          op = "<";
          break;
        case Assertion::Pred::Le:
          op = "<=";
          break;
        case Assertion::Pred::In:
          op = "in";
          break;
        case Assertion::Pred::Subset:
          op = "subset";
          break;
      }
      body = term_str(node.terms[0]) + " " + op + " " + term_str(node.terms[1]);
      level = 5;  // comparisons read badly unparenthesized inside 'and'
      break;
    }
    case K::Correct:
      body = "correct(" + term_str(node.terms[0]) + ")";
      break;
    case K::Under:
      body = "under " + location_to_string(node.guard_loc);
      break;
    case K::IsFail:
      body = "isfail";
      break;
    case K::TrueLit:
      body = "true";
      break;
    case K::FalseLit:
      body = "false";
      break;
    case K::SelfSugar:
      body = "self";
      break;
    case K::EventAtom: {
      std::ostringstream os;
      os << "on " << term_str(node.node_term) << ", " << location_to_string(node.loc) << " "
         << orientation_name(node.orient) << " " << node.event_kind << args_str(node.args);
      body = os.str();
      break;
    }
    case K::And:
      body = fmt_at(node.a, 3) + " and " + fmt_at(node.b, 4);
      break;
    case K::Or:
      body = fmt_at(node.a, 2) + " or " + fmt_at(node.b, 3);
      break;
    case K::Implies:
      body = fmt_at(node.a, 2) + " -> " + fmt_at(node.b, 2);
      break;
    case K::Forall:
    case K::Exists:
      body = std::string(node.kind == K::Forall ? "forall " : "exists ") + node.var + " : " +
             (node.sort == Sort::NodeSort ? "node" : "value") + " . " + fmt_at(node.a, 0);
      break;
    case K::StrongImplies:
    case K::LeadsTo:
    case K::PrecededBy:
    case K::Always: {
      auto sugar = resugar(node);
      if (sugar) {
        const char* op = sugar->kind == K::StrongImplies ? "=>>"
                         : sugar->kind == K::LeadsTo     ? "~~>"
                                                         : "<~~";
        body = fmt_at(sugar->a, 2) + " " + op + " " + fmt_at(sugar->b, 2);
        level = 1;
        break;
      }
      body = std::string("always ") + fmt_at(node.a, 4);
      level = 4;
      break;
    }
    default:
      body = std::string(unary_name(node.kind)) + " " + fmt_at(node.a, 4);
      break;
  }
  if (level < context) return "(" + body + ")";
  return body;
}

}  // namespace

std::string print_term(const TermPtr& t) { return term_str(t); }

std::string print_assertion(const APtr& a) { return fmt(a, 0); }

}  // namespace tlc
