#pragma once

// Seeded generators for small assertions (atoms over d, o, e and n) and
// small traces, shared by the oracle unit test and the acceptance suite.

#include <vector>

#include "test_support.hpp"
#include "tlc/assertion.hpp"
#include "tlc/sim.hpp"

namespace tlc::test {

inline APtr random_atom(Rng& rng) {
  using A = Assertion;
  const std::vector<std::string> kinds = {"a", "b", "c"};
  const std::vector<Location> locs = {{}, {0}, {1}, {0, 0}};
  switch (rng.below(6)) {
    case 0:
      return A::atom(A::Pred::Eq, Term::flexible(Flex::O),
                     Term::constant(Value::string(
                         rng.below(2) ? "req" : (rng.below(2) ? "ind" : "per"))));
    case 1: {
      const Location& d = locs[rng.below(locs.size())];
      Value::List xs;
      for (int i : d) xs.push_back(Value::integer(i));
      return A::atom(A::Pred::Eq, Term::flexible(Flex::D),
                     Term::constant(Value::sequence(std::move(xs))));
    }
    case 2:
      return A::atom(A::Pred::Eq, Term::flexible(Flex::N),
                     Term::constant(Value::node(static_cast<NodeId>(rng.below(3)))));
    case 3:
      return A::event_atom(Term::constant(Value::node(static_cast<NodeId>(rng.below(3)))),
                           locs[rng.below(locs.size())],
                           rng.below(2) ? Orientation::Request : Orientation::Indication,
                           kinds[rng.below(kinds.size())], {});
    case 4:
      return A::self_sugar();
    default:
      // n = x picks up the enclosing quantifier when one is generated.
      return A::atom(A::Pred::Eq, Term::flexible(Flex::N), Term::rigid("x"));
  }
}

inline APtr random_assertion(Rng& rng, int depth, bool bound_x = false) {
  using A = Assertion;
  using K = Assertion::Kind;
  if (depth == 0) {
    APtr atom = random_atom(rng);
    // Keep x closed unless a quantifier above binds it.
    if (!bound_x && atom->kind == K::Atom && atom->terms.size() == 2 &&
        atom->terms[1]->kind == Term::Kind::Rigid) {
      return A::self_sugar();
    }
    return atom;
  }
  switch (rng.below(16)) {
    case 0:
      return A::make(K::And, random_assertion(rng, depth - 1, bound_x),
                     random_assertion(rng, depth - 1, bound_x));
    case 1:
      return A::make(K::Or, random_assertion(rng, depth - 1, bound_x),
                     random_assertion(rng, depth - 1, bound_x));
    case 2:
      return A::make(K::Implies, random_assertion(rng, depth - 1, bound_x),
                     random_assertion(rng, depth - 1, bound_x));
    case 3:
      return A::make(K::Not, random_assertion(rng, depth - 1, bound_x));
    case 4:
      return A::make(K::AlwaysS, random_assertion(rng, depth - 1, bound_x));
    case 5:
      return A::make(K::PastAlwaysS, random_assertion(rng, depth - 1, bound_x));
    case 6:
      return A::make(K::EventuallyS, random_assertion(rng, depth - 1, bound_x));
    case 7:
      return A::make(K::PastEventuallyS, random_assertion(rng, depth - 1, bound_x));
    case 8:
      return A::make(K::Always, random_assertion(rng, depth - 1, bound_x));
    case 9:
      return A::make(K::Eventually, random_assertion(rng, depth - 1, bound_x));
    case 10:
      return A::make(K::PastEventually, random_assertion(rng, depth - 1, bound_x));
    case 11:
      return A::make(K::Next, random_assertion(rng, depth - 1, bound_x));
    case 12:
      return A::make(K::SelfOp, random_assertion(rng, depth - 1, bound_x));
    case 13:
      return A::quantifier(K::Forall, "x", Sort::NodeSort,
                           random_assertion(rng, depth - 1, true));
    case 14:
      return A::quantifier(K::Exists, "x", Sort::NodeSort,
                           random_assertion(rng, depth - 1, true));
    default:
      return random_assertion(rng, depth - 1, bound_x);
  }
}

inline Trace random_trace(Rng& rng) {
  const std::vector<std::string> kinds = {"a", "b", "c"};
  const std::vector<Location> locs = {{}, {0}, {1}, {0, 0}};
  std::size_t len = 1 + rng.below(6);
  std::vector<EventLabel> labels;
  int round = 0;
  for (std::size_t i = 0; i < len; ++i) {
    if (rng.below(4) == 0) round += 1;
    NodeId n = static_cast<NodeId>(rng.below(3));
    if (rng.below(8) == 0) {
      labels.push_back(label(n, round, {}, std::nullopt, "fail"));
      continue;
    }
    Orientation o = rng.below(3) == 0   ? Orientation::Periodic
                    : rng.below(2) == 0 ? Orientation::Request
                                        : Orientation::Indication;
    labels.push_back(label(n, round, locs[rng.below(locs.size())], o,
                           kinds[rng.below(kinds.size())]));
  }
  return tiny_trace(std::move(labels));
}

}  // namespace tlc::test
