#pragma once

#include <string>

#include "tlc/assertion.hpp"

namespace tlc {

// A validated member of the invariant sublanguage: boxed assertions (and
// propositional combinations of boxed assertions and flexible-free facts)
// whose event atoms carry explicit locations extending declared_level, with
// no next and no self operators.
struct InvariantSpec {
  APtr body;
  Location declared_level;
};

// Throws Error("not-boxed"), Error("forbidden-operator") or
// Error("atom-shape") naming the offending subterm.
InvariantSpec validate_invariant(const APtr& a, const Location& d);

// Rewrites every event-atom location d' to the location of branch i, i.e.
// d' extended under i; Correct atoms and rigid-only atoms are unchanged.
APtr push(int i, const APtr& a);

// Adds the guard implication under every always-flavored operator; the
// eventually-flavored operators recurse unguarded, as does an
// always-eventually pair (the eventuality absorbs interleaved events).
APtr restrict_assertion(const APtr& guard, const APtr& a);

// Drops a guard implication whose consequent's antecedent already pins the
// location under the guard.
APtr simplify_guard(const APtr& a);

struct LowerResult {
  APtr expanded;    // arrow sugar unfolded to boxed implications
  APtr pushed;
  APtr restricted;
  APtr lowered;     // after guard simplification
};

LowerResult lower_steps(int i, const InvariantSpec& spec);
APtr lower(int i, const InvariantSpec& spec);

// Test helper: strips the branch index added by push(i, .); identity law
// un_push(i, push(i, a)) == a up to pointer structure.
APtr un_push(int i, const APtr& a);

}  // namespace tlc
