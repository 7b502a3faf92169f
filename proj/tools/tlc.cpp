#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "tlc/audit.hpp"
#include "tlc/error.hpp"
#include "tlc/eval.hpp"
#include "tlc/lower.hpp"
#include "tlc/parse.hpp"
#include "tlc/protocol.hpp"
#include "tlc/scenario_io.hpp"
#include "tlc/sim.hpp"
#include "tlc/trace_io.hpp"

namespace {

// Exit codes: 0 ok, 1 spec violation or audit failure, 2 input error,
// 3 lowering rejection.
constexpr int kOk = 0;
constexpr int kViolation = 1;
constexpr int kInputError = 2;
constexpr int kRejected = 3;

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw tlc::Error("io", "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

tlc::Scenario scenario_with_seed_env(const std::string& path) {
  tlc::Scenario s = tlc::load_scenario_file(path);
  if (const char* env = std::getenv("TLC_SEED")) {
    s.seed = std::strtoull(env, nullptr, 10);
  }
  return s;
}

int cmd_run(const std::string& scenario_path, const std::string& out_path) {
  tlc::Scenario s = scenario_with_seed_env(scenario_path);
  tlc::Trace trace = tlc::run_scenario(s);
  if (out_path == "-") {
    tlc::write_trace(trace, std::cout);
  } else {
    tlc::write_trace_file(trace, out_path);
  }
  std::cerr << "wrote " << trace.labels.size() << " labels\n";
  return kOk;
}

tlc::EvalContext context_for(const tlc::Trace& trace, bool closed_world) {
  tlc::EvalContext ctx = tlc::context_for_trace(trace);
  ctx.projections = tlc::library_projections();
  ctx.closed_world = closed_world;
  return ctx;
}

int cmd_check(const std::string& trace_path, const std::string& spec_path, bool closed_world) {
  tlc::Trace trace = tlc::read_trace_file(trace_path);
  auto specs = tlc::parse_spec_file(slurp(spec_path), tlc::library_symbols());
  tlc::EvalContext ctx = context_for(trace, closed_world);
  bool any_false = false;
  for (const auto& spec : specs) {
    tlc::CheckReport report = tlc::check_report(spec.name, spec.assertion, trace, ctx);
    std::cout << spec.name << ": " << tlc::verdict_name(report.verdict);
    if (report.verdict == tlc::Verdict::False) {
      any_false = true;
      if (report.violation_position)
        std::cout << " at position " << *report.violation_position;
      for (const auto& [var, value] : report.witness)
        std::cout << " " << var << "=" << value.to_string();
    }
    std::cout << "\n";
  }
  return any_false ? kViolation : kOk;
}

int cmd_lower(const std::string& spec_path, int branch, bool show_steps) {
  auto specs = tlc::parse_spec_file(slurp(spec_path), tlc::library_symbols());
  for (const auto& spec : specs) {
    tlc::InvariantSpec inv;
    try {
      inv = tlc::validate_invariant(spec.assertion, {});
    } catch (const tlc::Error& e) {
      std::cerr << spec.name << ": rejected, " << e.what() << "\n";
      return kRejected;
    }
    tlc::LowerResult steps = tlc::lower_steps(branch, inv);
    if (show_steps) {
      std::cout << "// " << spec.name << " expanded:   " << tlc::print_assertion(steps.expanded)
                << "\n";
      std::cout << "// " << spec.name << " pushed:     " << tlc::print_assertion(steps.pushed)
                << "\n";
      std::cout << "// " << spec.name << " restricted: "
                << tlc::print_assertion(steps.restricted) << "\n";
    }
    std::cout << "spec " << spec.name << " : " << tlc::print_assertion(steps.lowered) << "\n";
  }
  return kOk;
}

int cmd_audit(const std::string& trace_path) {
  tlc::Trace trace = tlc::read_trace_file(trace_path);
  tlc::AuditReport report = tlc::run_audit(trace);
  tlc::print_audit(report, std::cout);
  return report.ok() ? kOk : kViolation;
}

struct SeedRange {
  std::uint64_t from = 0;
  std::uint64_t to = 0;
};

SeedRange parse_seeds(const std::string& text) {
  auto dots = text.find("..");
  if (dots == std::string::npos)
    throw tlc::Error("validation", "seed range must look like a..b");
  SeedRange r;
  r.from = std::strtoull(text.substr(0, dots).c_str(), nullptr, 10);
  r.to = std::strtoull(text.substr(dots + 2).c_str(), nullptr, 10);
  if (r.to < r.from) throw tlc::Error("validation", "empty seed range");
  return r;
}

int cmd_batch(const std::string& scenario_path, const std::string& seeds, bool closed_world) {
  tlc::Scenario base = tlc::load_scenario_file(scenario_path);
  SeedRange range = parse_seeds(seeds);

  // Preset scenarios check their own spec library; free-form stacks only
  // run the audit.
  std::string preset_name;
  {
    std::string sj = base.stack_json;
    if (sj.size() >= 2 && sj.front() == '"' && sj.back() == '"')
      preset_name = sj.substr(1, sj.size() - 2);
  }
  std::vector<tlc::SpecEntry> specs;
  std::vector<tlc::APtr> assumptions;
  if (tlc::is_preset_name(preset_name)) {
    tlc::ProtocolPreset preset = tlc::preset_by_name(preset_name, base.nodes);
    specs = preset.specs;
    assumptions = preset.assumptions;
  }

  bool all_ok = true;
  for (std::uint64_t seed = range.from; seed <= range.to; ++seed) {
    tlc::Scenario s = base;
    s.seed = seed;
    tlc::Trace trace = tlc::run_scenario(s);
    tlc::AuditReport audit = tlc::run_audit(trace);
    std::cout << "seed " << seed << ": audit " << (audit.ok() ? "pass" : "FAIL");
    if (!audit.ok()) all_ok = false;

    tlc::EvalContext ctx = context_for(trace, closed_world);
    bool assumptions_hold = true;
    for (const auto& assumption : assumptions) {
      if (tlc::check(assumption, trace, ctx) != tlc::Verdict::True) assumptions_hold = false;
    }
    for (const auto& spec : specs) {
      if (spec.needs_assumptions && !assumptions_hold) {
        std::cout << "  " << spec.name << "=skipped";
        continue;
      }
      tlc::Verdict v = tlc::check(spec.assertion, trace, ctx);
      std::cout << "  " << spec.name << "=" << tlc::verdict_name(v);
      if (v == tlc::Verdict::False) all_ok = false;
    }
    if (!assumptions_hold) std::cout << "  [assumption not applicable]";
    std::cout << "\n";
  }
  return all_ok ? kOk : kViolation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Layered distributed components: simulate, check, lower, audit"};
  app.require_subcommand(1);

  std::string scenario_path, trace_path, spec_path, out_path = "-", seeds = "0..0";
  int branch = 0;
  bool closed_world = false, show_steps = false;

  auto* run = app.add_subcommand("run", "Run a scenario and write its trace");
  run->add_option("scenario", scenario_path, "scenario json")->required();
  run->add_option("-o,--out", out_path, "trace output path, - for stdout");

  auto* check = app.add_subcommand("check", "Check a spec file against a trace");
  check->add_option("trace", trace_path, "trace file")->required();
  check->add_option("-s,--specs", spec_path, "spec file")->required();
  check->add_flag("--closed-world", closed_world, "treat the trace as complete");

  auto* lower = app.add_subcommand("lower", "Lower top-level invariants to a branch");
  lower->add_option("specs", spec_path, "spec file")->required();
  lower->add_option("--branch", branch, "substack index")->required();
  lower->add_flag("--trace", show_steps, "print push/restrict/simplify steps");

  auto* audit = app.add_subcommand("audit", "Audit a trace against the basic-rule axioms");
  audit->add_option("trace", trace_path, "trace file")->required();

  auto* batch = app.add_subcommand("batch", "Run, audit and check a scenario over seeds");
  batch->add_option("scenario", scenario_path, "scenario json")->required();
  batch->add_option("--seeds", seeds, "inclusive range a..b")->required();
  batch->add_flag("--closed-world", closed_world, "treat traces as complete");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(scenario_path, out_path);
    if (check->parsed()) return cmd_check(trace_path, spec_path, closed_world);
    if (lower->parsed()) return cmd_lower(spec_path, branch, show_steps);
    if (audit->parsed()) return cmd_audit(trace_path);
    if (batch->parsed()) return cmd_batch(scenario_path, seeds, closed_world);
  } catch (const tlc::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}
