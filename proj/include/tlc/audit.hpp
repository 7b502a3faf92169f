#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "tlc/event.hpp"

namespace tlc {

// Concrete trace scans for the basic-rule axioms, used as an oracle
// independent of the assertion evaluator.
struct AuditEntry {
  enum class Result { Pass, Fail, NotApplicable };
  std::string axiom;
  Result result = Result::Pass;
  std::string detail;  // first counterexample label ids on failure
};

struct AuditReport {
  std::vector<AuditEntry> entries;
  bool ok() const;
  const AuditEntry* entry(const std::string& axiom) const;
};

AuditReport run_audit(const Trace& trace);

void print_audit(const AuditReport& report, std::ostream& os);

}  // namespace tlc
