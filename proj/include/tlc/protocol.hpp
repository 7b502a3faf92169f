#pragma once

#include <map>
#include <string>
#include <vector>

#include "tlc/assertion.hpp"
#include "tlc/component.hpp"
#include "tlc/parse.hpp"

namespace tlc {

// Component factories. Factories that fan out to all nodes or compare
// against quorums take the scenario node count.
StackDef basic_link();
ComponentDef stubborn_link();
ComponentDef perfect_link();
ComponentDef best_effort_broadcast(int num_nodes);
ComponentDef uniform_reliable_broadcast(int num_nodes);
ComponentDef eventually_perfect_failure_detector(int num_nodes);
ComponentDef eventual_leader_elector(int num_nodes);
ComponentDef epoch_consensus(int num_nodes);
ComponentDef epoch_change(int num_nodes);
ComponentDef uniform_consensus(int num_nodes);

ComponentDef component_by_name(const std::string& name, int num_nodes);

struct SpecEntry {
  std::string name;
  std::string text;
  APtr assertion;
  bool liveness = false;           // contains a future eventuality
  bool needs_assumptions = false;  // skipped when preset assumptions fail
};

// All named specifications (SL1..UC4) parsed from their concrete syntax.
const std::vector<SpecEntry>& spec_library();
const SpecEntry* find_spec(const std::string& name);

// Parser symbol table extended with every registered state field name.
const SymbolTable& library_symbols();

// State field projections of every library component, for evaluation
// contexts.
std::map<std::string, std::function<Value(const Value&)>> library_projections();

struct ProtocolPreset {
  std::string name;
  StackDef stack;
  std::vector<SpecEntry> specs;
  std::vector<std::string> assumption_texts;
  std::vector<APtr> assumptions;  // e.g. correct majority
};

// Preset stacks reachable from scenario files: sl, pl, beb, urb, epfd, eld,
// ec, ech, uc — each the full tree down to basic links.
ProtocolPreset preset_by_name(const std::string& name, int num_nodes);
bool is_preset_name(const std::string& name);
std::vector<std::string> preset_names();

}  // namespace tlc
