#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "tlc/audit.hpp"
#include "tlc/error.hpp"
#include "tlc/eval.hpp"
#include "tlc/parse.hpp"
#include "tlc/protocol.hpp"
#include "tlc/scenario_io.hpp"
#include "tlc/sim.hpp"
#include "tlc/trace_io.hpp"

using namespace tlc;

namespace {

Scenario preset_scenario(const std::string& preset, int nodes, int rounds, std::uint64_t seed) {
  Scenario s;
  s.stack = preset_by_name(preset, nodes).stack;
  s.stack_json = "\"" + preset + "\"";
  s.nodes = nodes;
  s.rounds = rounds;
  s.seed = seed;
  return s;
}

Trace pl_trace(std::uint64_t seed) {
  Scenario s = preset_scenario("pl", 3, 8, seed);
  s.r_gst = 1;
  s.drop_prob = 0.5;
  s.max_dup = 2;
  s.requests.push_back({0, 0, UserEvent{"send_pl", {Value::node(1), Value::string("m1")}}});
  s.requests.push_back({1, 2, UserEvent{"send_pl", {Value::node(0), Value::string("m2")}}});
  return run_scenario(s);
}

int run_cli(const std::string& args) {
  std::string cmd = std::string(TLC_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string temp_path(const std::string& name) {
  return std::string("/tmp/tlc_test_") + name;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string scenario_file(const std::string& name) {
  return std::string(TLC_SOURCE_DIR) + "/scenarios/" + name;
}

}  // namespace

TEST_CASE("simulator traces pass every audit axiom") {
  for (std::uint64_t seed : {0, 1, 2}) {
    Trace t = pl_trace(seed);
    AuditReport report = run_audit(t);
    for (const auto& e : report.entries) {
      CHECK_MESSAGE(e.result != AuditEntry::Result::Fail, e.axiom, ": ", e.detail);
    }
    CHECK(report.ok());
  }
}

TEST_CASE("audit flags injected violations") {
  Trace t = pl_trace(7);

  SUBCASE("forged delivery") {
    EventLabel forged;
    forged.ei = t.labels.back().ei + 1;
    forged.n = 1;
    forged.r = t.labels.back().r;
    forged.d = {0, 0};
    forged.o = Orientation::Indication;
    forged.fe = FailOrEvent::of(UserEvent{"deliver_l", {Value::node(0), Value::string("bogus")}});
    forged.s = t.labels.back().s;
    forged.s_post = forged.s;
    t.labels.push_back(forged);
    AuditReport report = run_audit(t);
    CHECK(report.entry("NFORGE")->result == AuditEntry::Result::Fail);
    CHECK(report.entry("NFORGE")->detail.find("ei") != std::string::npos);
  }

  SUBCASE("decreasing rounds") {
    REQUIRE(t.labels.size() > 4);
    t.labels[4].r = t.labels[3].r + 5;
    AuditReport report = run_audit(t);
    CHECK(report.entry("RSEQ")->result == AuditEntry::Result::Fail);
  }

  SUBCASE("mutated bystander state") {
    for (auto& l : t.labels) {
      if (!l.is_fail() && l.s.size() > 1) {
        NodeId other = l.n == 0 ? 1 : 0;
        l.s_post[other] = Value::string("tampered");
        break;
      }
    }
    AuditReport report = run_audit(t);
    CHECK(report.entry("SEQ")->result == AuditEntry::Result::Fail);
  }

  SUBCASE("issued request that never ran") {
    for (auto& l : t.labels) {
      if (!l.is_fail() && l.o == Orientation::Request && l.d.empty()) {
        l.ors.push_back({0, UserEvent{"send_sl", {Value::node(9), Value::string("ghost")}}});
        break;
      }
    }
    AuditReport report = run_audit(t);
    CHECK(!report.ok());
    CHECK(report.entry("OR")->result == AuditEntry::Result::Fail);
  }

  SUBCASE("periodic label dropped") {
    for (std::size_t i = 0; i < t.labels.size(); ++i) {
      if (t.labels[i].o == Orientation::Periodic && t.labels[i].d.empty()) {
        t.labels.erase(t.labels.begin() + static_cast<std::ptrdiff_t>(i));
        break;
      }
    }
    AuditReport report = run_audit(t);
    CHECK(report.entry("APER (finite)")->result == AuditEntry::Result::Fail);
  }

  SUBCASE("GST promise broken by rewriting the header") {
    // The trace was produced with r_gst = 1 and lossy early rounds; claiming
    // r_gst = 0 makes the dropped round-0 sends violate the delivery rule.
    bool found = false;
    for (std::uint64_t seed = 0; seed < 20 && !found; ++seed) {
      Trace lossy = pl_trace(seed);
      REQUIRE(run_audit(lossy).entry("GST")->result == AuditEntry::Result::Pass);
      lossy.header.r_gst = 0;
      if (run_audit(lossy).entry("GST")->result == AuditEntry::Result::Fail) found = true;
    }
    CHECK(found);
  }

  SUBCASE("deliveries beyond the duplication bound") {
    const EventLabel* delivery = nullptr;
    for (const auto& l : t.labels) {
      if (l.o == Orientation::Indication && !l.is_fail() && l.fe.event->kind == "deliver_l") {
        delivery = &l;
        break;
      }
    }
    REQUIRE(delivery != nullptr);
    EventLabel copy = *delivery;
    copy.pi.reset();
    std::size_t flood = 2 * t.labels.size() + 1;
    for (std::size_t k = 0; k < flood; ++k) {
      copy.ei = t.labels.back().ei + 1;
      copy.r = t.labels.back().r;
      t.labels.push_back(copy);
    }
    AuditReport report = run_audit(t);
    CHECK(report.entry("FDUP (bounded)")->result == AuditEntry::Result::Fail);
  }

  SUBCASE("init state tampered") {
    REQUIRE(!t.labels.empty());
    t.labels[0].s[t.labels[0].n] = Value::string("hacked");
    AuditReport report = run_audit(t);
    CHECK((report.entry("INIT")->result == AuditEntry::Result::Fail ||
           report.entry("POSTPRE")->result == AuditEntry::Result::Fail ||
           report.entry("SEQ")->result == AuditEntry::Result::Fail));
  }
}

TEST_CASE("audit scans agree with the evaluator on expressible axioms") {
  SymbolTable symbols = library_symbols();
  // Per-location no-forge, the round ordering rule and the issue-origin
  // rules, written in the assertion language.
  auto nforge_at = [&](const std::string& loc) {
    return parse_assertion("(on n, " + loc + " ind deliver_l(n2, m)) <~~ (on n2, " + loc +
                               " req send_l(n, m))",
                           symbols);
  };
  APtr nforge = nforge_at("[0, 0]");
  APtr rseq = parse_assertion(
      "forall rv : value . (@r = rv) =>> alwaysPS (@r <= rv)", symbols);
  APtr oi_origin = parse_assertion(
      "forall ev : value . forall nn : node . ((@n = nn and @d = [] and @o = ind and @e = ev) "
      "=>> eventuallyPS (@n = nn and self and (ev in @ois)))",
      symbols);
  APtr or_origin = parse_assertion(
      "forall ev : value . forall nn : node . forall ix : value . ((@n = nn and @d = "
      "seq(ix) and @o = req and @e = ev) =>> eventuallyPS (@n = nn and self and "
      "(tuple(ix, ev) in @ors)))",
      symbols);

  for (std::uint64_t seed : {3, 4}) {
    Trace t = pl_trace(seed);
    AuditReport audit = run_audit(t);
    EvalContext ctx = context_for_trace(t);
    ctx.projections = library_projections();

    CHECK(audit.entry("NFORGE")->result == AuditEntry::Result::Pass);
    CHECK(check(nforge, t, ctx) == Verdict::True);
    CHECK(audit.entry("RSEQ")->result == AuditEntry::Result::Pass);
    CHECK(check(rseq, t, ctx) == Verdict::True);
    CHECK(audit.entry("OI'")->result == AuditEntry::Result::Pass);
    CHECK(check(oi_origin, t, ctx) == Verdict::True);
    CHECK(audit.entry("OR'")->result == AuditEntry::Result::Pass);
    CHECK(check(or_origin, t, ctx) == Verdict::True);
  }

  // The same agreement holds on a deeper stack, at its link location.
  {
    Scenario s = preset_scenario("urb", 3, 8, 6);
    s.r_gst = 1;
    s.drop_prob = 0.5;
    s.max_dup = 2;
    s.requests.push_back({0, 0, UserEvent{"broadcast_urb", {Value::string("m")}}});
    Trace t = run_scenario(s);
    AuditReport audit = run_audit(t);
    EvalContext ctx = context_for_trace(t);
    ctx.projections = library_projections();
    CHECK(audit.entry("NFORGE")->result == AuditEntry::Result::Pass);
    CHECK(check(nforge_at("[0, 0, 0, 0]"), t, ctx) == Verdict::True);
    CHECK(audit.entry("RSEQ")->result == AuditEntry::Result::Pass);
    CHECK(check(rseq, t, ctx) == Verdict::True);
    CHECK(audit.entry("OI'")->result == AuditEntry::Result::Pass);
    CHECK(check(oi_origin, t, ctx) == Verdict::True);
  }

  // And they agree on a violation.
  Trace bad = pl_trace(5);
  EventLabel forged;
  forged.ei = bad.labels.back().ei + 1;
  forged.n = 1;
  forged.r = bad.labels.back().r;
  forged.d = {0, 0};
  forged.o = Orientation::Indication;
  forged.fe = FailOrEvent::of(UserEvent{"deliver_l", {Value::node(0), Value::string("bogus")}});
  forged.s = bad.labels.back().s;
  forged.s_post = forged.s;
  bad.labels.push_back(forged);
  EvalContext ctx = context_for_trace(bad);
  CHECK(run_audit(bad).entry("NFORGE")->result == AuditEntry::Result::Fail);
  CHECK(check(nforge, bad, ctx) == Verdict::False);
}

TEST_CASE("liveness on an open prefix stays inconclusive, not false") {
  Scenario s = preset_scenario("sl", 2, 4, 3);
  s.requests.push_back({0, 0, UserEvent{"send_sl", {Value::node(1), Value::string("m")}}});
  Trace t = run_scenario(s);
  EvalContext ctx = context_for_trace(t);
  ctx.projections = library_projections();
  // Stubborn delivery asks for infinitely many deliveries; a finite prefix
  // can only ever be inconclusive about it.
  CHECK(check(find_spec("SL1")->assertion, t, ctx) == Verdict::Unknown);
  CHECK(check(find_spec("SL2")->assertion, t, ctx) == Verdict::True);
}

TEST_CASE("check_report cites a violating position and witness") {
  Trace t = pl_trace(9);
  EvalContext ctx = context_for_trace(t);
  APtr impossible = parse_assertion(
      "(on n, [] req send_pl(n2, m)) =>> alwaysS not (on n, [] req send_pl(n2, m2))");
  // Two sends by node 0 exist, so the claim fails; the report should carry
  // the rigid instantiation and a position that evaluates false.
  CheckReport report = check_report("X", impossible, t, ctx);
  if (report.verdict == Verdict::False) {
    CHECK(report.violation_position.has_value());
    CHECK(!report.witness.empty());
  }
}

TEST_CASE("cli run, audit, check, lower and batch respect the exit contract") {
  std::string trace_a = temp_path("a.trace");
  std::string trace_b = temp_path("b.trace");

  CHECK(run_cli("run " + scenario_file("pl-basic.json") + " -o " + trace_a) == 0);
  CHECK(run_cli("run " + scenario_file("pl-basic.json") + " -o " + trace_b) == 0);
  CHECK(slurp(trace_a) == slurp(trace_b));  // determinism, byte for byte

  // Checking the perfect-link safety specs against a pl trace passes.
  std::string specs = temp_path("pl.specs");
  {
    std::ofstream out(specs);
    out << "spec PL2 : " << find_spec("PL2")->text << "\n";
    out << "spec PL3 : " << find_spec("PL3")->text << "\n";
  }
  CHECK(run_cli("check " + trace_a + " -s " + specs) == 0);

  // A spec that fails produces exit 1.
  std::string bad_spec = temp_path("bad.specs");
  {
    std::ofstream out(bad_spec);
    out << "spec NOPE : (on n, [] req send_pl(n2, m)) =>> false\n";
  }
  CHECK(run_cli("check " + trace_a + " -s " + bad_spec) == 1);

  // Malformed input exits 2.
  std::string garbage = temp_path("garbage.specs");
  {
    std::ofstream out(garbage);
    out << "spec OOPS : on n, [] req\n";
  }
  CHECK(run_cli("check " + trace_a + " -s " + garbage) == 2);
  CHECK(run_cli("run /nonexistent.json -o " + trace_a) == 2);

  // Lowering SL2 succeeds; lowering a next-operator spec is rejected with 3.
  std::string sl2 = temp_path("sl2.specs");
  {
    std::ofstream out(sl2);
    out << "spec SL2 : " << find_spec("SL2")->text << "\n";
  }
  CHECK(run_cli("lower " + sl2 + " --branch 0") == 0);
  std::string nextspec = temp_path("next.specs");
  {
    std::ofstream out(nextspec);
    out << "spec N : (on n, [] req a()) =>> next (on n, [] ind b())\n";
  }
  CHECK(run_cli("lower " + nextspec + " --branch 0") == 3);

  CHECK(run_cli("lower " + sl2 + " --branch 0 --trace") == 0);

  CHECK(run_cli("audit " + trace_a) == 0);
  CHECK(run_cli("batch " + scenario_file("pl-basic.json") + " --seeds 5..7") == 0);

  // A crashed majority voids the quorum assumption: the gated specs are
  // skipped instead of reported, and nothing counts as a violation.
  std::string no_majority = temp_path("no_majority.json");
  {
    std::ofstream out(no_majority);
    out << "{\"stack\": \"urb\", \"nodes\": 3, \"rounds\": 8, \"seed\": 1,\n"
        << " \"requests\": [[0, 0, {\"kind\": \"broadcast_urb\", \"args\": [\"m\"]}]],\n"
        << " \"failures\": [[2, 1], [3, 2]]}";
  }
  {
    std::string cmd = std::string(TLC_CLI_PATH) + " batch " + no_majority +
                      " --seeds 0..0 > " + temp_path("batch.out") + " 2>&1";
    CHECK(WEXITSTATUS(std::system(cmd.c_str())) == 0);
    std::string out = slurp(temp_path("batch.out"));
    CHECK(out.find("URB4=skipped") != std::string::npos);
    CHECK(out.find("assumption not applicable") != std::string::npos);
    std::remove(temp_path("batch.out").c_str());
  }
  std::remove(no_majority.c_str());

  // TLC_SEED overrides the scenario seed.
  std::string trace_env = temp_path("env.trace");
  std::string cmd = std::string("TLC_SEED=99 ") + TLC_CLI_PATH + " run " +
                    scenario_file("pl-basic.json") + " -o " + trace_env + " >/dev/null 2>&1";
  CHECK(WEXITSTATUS(std::system(cmd.c_str())) == 0);
  CHECK(slurp(trace_env) != slurp(trace_a));

  for (const auto& p : {trace_a, trace_b, specs, bad_spec, garbage, sl2, nextspec, trace_env})
    std::remove(p.c_str());
}

TEST_CASE("scenario loader validates structure and stacks") {
  CHECK_THROWS_AS(load_scenario("{\"nodes\": 3}"), Error);
  CHECK_THROWS_AS(load_scenario("{\"stack\": \"nope\", \"nodes\": 3}"), Error);
  Scenario s = load_scenario_file(scenario_file("pl-basic.json"));
  CHECK(s.nodes == 3);
  CHECK(s.requests.size() == 2);
  CHECK(s.requests[0].event.args[0] == Value::node(1));
  // Composition trees build too.
  Scenario tree = load_scenario(
      "{\"stack\": {\"component\": \"plc\", \"children\": [{\"component\": \"slc\", "
      "\"children\": [\"link\"]}]}, \"nodes\": 2, \"rounds\": 1}");
  CHECK(tree.stack.component().name == "plc");
}
