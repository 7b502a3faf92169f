#pragma once

#include <memory>
#include <set>
#include <string>
#include <vector>

#include "tlc/event.hpp"
#include "tlc/value.hpp"

namespace tlc {

// Three-valued verdict over a finite trace prefix. Kleene lattice:
// False < Unknown < True; negation swaps True/False and fixes Unknown.
enum class Verdict { False = 0, Unknown = 1, True = 2 };

Verdict verdict_and(Verdict a, Verdict b);
Verdict verdict_or(Verdict a, Verdict b);
Verdict verdict_not(Verdict v);
const char* verdict_name(Verdict v);

enum class Flex { N, R, D, O, E, Ors, Ois, S, SPost };

struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Term {
  enum class Kind {
    Rigid,       // named rigid variable
    Flexible,    // @n @r @d @o @e @ors @ois @s @s'
    ConstVal,    // literal value (int, string, orientation, location, event)
    CorrectSet,  // the Correct constant
    NodeSet,     // the node universe constant
    FuncApp,     // interpreted function or registered state-field projection
    VarApp,      // application of a map-valued variable, e.g. @s(n)
  };

  Kind kind = Kind::ConstVal;
  std::string name;         // rigid / function / applied-variable name
  Flex flex = Flex::N;      // for Flexible and flexible-base VarApp
  bool var_is_flex = false; // VarApp base: flexible (@s/@s') vs rigid
  Value value;              // for ConstVal
  std::vector<TermPtr> args;

  static TermPtr rigid(std::string name);
  static TermPtr flexible(Flex f);
  static TermPtr constant(Value v);
  static TermPtr correct_set();
  static TermPtr node_set();
  static TermPtr func(std::string name, std::vector<TermPtr> args);
  static TermPtr apply_rigid(std::string name, std::vector<TermPtr> args);
  static TermPtr apply_flex(Flex f, std::vector<TermPtr> args);
};

enum class Sort { NodeSort, ValueSort };

struct Assertion;
using APtr = std::shared_ptr<const Assertion>;

// AST of the temporal language. Core operators plus the sugar forms the
// parser keeps for printing; desugaring is the evaluator's job.
struct Assertion {
  enum class Kind {
    // atoms
    Atom,        // pred over terms
    Correct,     // t in Correct
    Under,       // current location extends guard_loc (emitted by restrict)
    IsFail,      // current label is a fail label
    EventAtom,   // on t, d o kind(args): n = t and d = lit and o = lit and e = lit
    SelfSugar,   // the three-disjunct self test
    TrueLit,
    FalseLit,
    // propositional / first-order
    And,
    Or,       // sugar
    Not,
    Implies,  // sugar
    Forall,
    Exists,  // sugar
    // temporal, strict
    AlwaysS,
    PastAlwaysS,
    EventuallyS,
    PastEventuallyS,
    Next,
    SelfOp,
    // temporal sugar (non-strict and combinators)
    Always,
    PastAlways,
    Eventually,
    PastEventually,
    StrongImplies,  // A =>> B  ==  always (A -> B)
    LeadsTo,        // A ~~> B  ==  always (A -> eventually B)
    PrecededBy,     // A <~~ B  ==  always (A -> eventuallyP B)
  };

  enum class Pred { Eq, Lt, Le, In, Subset };

  Kind kind;
  Pred pred = Pred::Eq;
  std::vector<TermPtr> terms;  // Atom operands; Correct's single term
  // EventAtom payload:
  TermPtr node_term;
  Location loc;
  Orientation orient = Orientation::Request;
  std::string event_kind;
  std::vector<TermPtr> args;
  // quantifier payload:
  std::string var;
  Sort sort = Sort::ValueSort;
  // guard payload:
  Location guard_loc;
  // children
  APtr a, b;

  static APtr atom(Pred p, TermPtr lhs, TermPtr rhs);
  static APtr correct(TermPtr t);
  static APtr under(Location d);
  static APtr is_fail();
  static APtr event_atom(TermPtr node, Location d, Orientation o, std::string kind,
                         std::vector<TermPtr> args);
  static APtr self_sugar();
  static APtr true_lit();
  static APtr false_lit();
  static APtr make(Kind k, APtr a, APtr b = nullptr);
  static APtr quantifier(Kind k, std::string var, Sort sort, APtr body);
};

bool is_always_class(Assertion::Kind k);      // always / alwaysP / strict forms
bool is_eventually_class(Assertion::Kind k);  // eventually / eventuallyP / strict
bool is_future_eventually(Assertion::Kind k);

// Expands every sugar node to the core language of atoms, And, Not, Forall
// and the strict temporal operators.
APtr desugar(const APtr& a);

// True when the assertion (after desugaring) contains a future eventuality;
// used to tag specs safety vs liveness.
bool contains_future_eventuality(const APtr& a);

// Free rigid variables with inferred sorts: a rigid used as an event-atom
// node position or inside correct(t) gets the node sort.
std::vector<std::pair<std::string, Sort>> free_rigids(const APtr& a);

std::string print_assertion(const APtr& a);
std::string print_term(const TermPtr& t);

}  // namespace tlc
