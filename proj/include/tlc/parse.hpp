#pragma once

#include <set>
#include <string>
#include <vector>

#include "tlc/assertion.hpp"

namespace tlc {

// Function names the parser accepts beyond the built-ins; protocol state
// field projections register here.
struct SymbolTable {
  std::set<std::string> functions;

  static SymbolTable with_builtins();
  void add(const std::string& name) { functions.insert(name); }
  bool known(const std::string& name) const { return functions.count(name) > 0; }
};

APtr parse_assertion(const std::string& text);
APtr parse_assertion(const std::string& text, const SymbolTable& symbols);

struct NamedSpec {
  std::string name;
  APtr assertion;
};

// Spec files: `spec NAME : <assertion>` blocks, '//' comments.
std::vector<NamedSpec> parse_spec_file(const std::string& text, const SymbolTable& symbols);

}  // namespace tlc
