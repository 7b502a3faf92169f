#pragma once

#include <string>

#include "tlc/sim.hpp"

namespace tlc {

// Scenario files: JSON with keys stack (preset name or composition tree),
// nodes, r_gst, rounds, seed, requests, failures, drop_prob, max_dup.
Scenario load_scenario(const std::string& json_text);
Scenario load_scenario_file(const std::string& path);

// Rebuilds the stack recorded in a trace header (for replay-based checks);
// throws Error("validation") when the header does not name library
// components.
StackDef stack_from_json(const std::string& json_text, int num_nodes);

}  // namespace tlc
