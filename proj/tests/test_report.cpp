#include "doctest.h"
#include "json.hpp"
#include "report.hpp"

using namespace cellia;
using nlohmann::json;

namespace {

RunConfig base(const std::string& command) {
  RunConfig c;
  c.command = command;
  c.emit_timestamp = false;
  return c;
}

}  // namespace

TEST_CASE("graph report: counts, verdicts, artifacts") {
  RunConfig c = base("graph");
  c.r = 2;
  const RunOutput out = run_command(c);
  CHECK(out.verdicts_pass);
  const json rep = json::parse(out.report_json);
  CHECK(rep["pass"] == true);
  CHECK(rep["results"]["counts"]["nodes"] == 23);
  CHECK(rep["results"]["closed_forms"]["nodes"] == 23);
  CHECK(rep["config"]["r"] == 2);
  CHECK(rep.contains("generated_at") == false);

  std::size_t shapes = 0;
  for (std::size_t p = out.dot.find("shape="); p != std::string::npos;
       p = out.dot.find("shape=", p + 1))
    ++shapes;
  CHECK(shapes == 23);
  CHECK(out.csv.find("id,a,b,coset") == 0);
}

TEST_CASE("reports are byte-identical for identical config and seed") {
  for (const std::string cmd : {"graph", "design", "bounds"}) {
    RunConfig c = base(cmd);
    c.r = 2;
    c.M = 2;
    const RunOutput a = run_command(c);
    const RunOutput b = run_command(c);
    CHECK(a.report_json == b.report_json);
    CHECK(a.csv == b.csv);
  }
}

TEST_CASE("bounds report carries the exact radius-1 optimum") {
  RunConfig c = base("bounds");
  c.r = 1;
  c.M = 2;
  c.exact_q1 = true;
  const RunOutput out = run_command(c);
  CHECK(out.verdicts_pass);
  const json rep = json::parse(out.report_json);
  CHECK(rep["results"]["q1_exact"]["computed"] == true);
  CHECK(rep["results"]["q1_exact"]["opt_sum"] == 8);
  CHECK(rep["results"]["s_star"] == 3);
}

TEST_CASE("design and simulate commands pass their verdicts") {
  RunConfig d = base("design");
  d.r = 2;
  d.M = 3;
  d.seeds = 2;
  CHECK(run_command(d).verdicts_pass);

  RunConfig s = base("simulate");
  s.r = 2;
  s.M = 2;
  s.mode = "intra-joint";
  s.snr_db = {40.0, 60.0};
  const RunOutput out = run_command(s);
  CHECK(out.verdicts_pass);
  const json rep = json::parse(out.report_json);
  CHECK(rep["results"]["noiseless"]["all_decoded"] == true);
  CHECK(rep["results"]["dof_slope"]["avg"].get<double>() ==
        doctest::Approx(1.0).epsilon(0.05));
  CHECK(out.csv.find("rate_bits") != std::string::npos);
}

TEST_CASE("robust and verify commands pass their verdicts") {
  RunConfig r = base("robust");
  r.r = 2;
  r.M = 2;
  r.random_states = 3;
  r.exhaustive_neighborhood = true;
  CHECK(run_command(r).verdicts_pass);

  RunConfig v = base("verify");
  v.r = 2;
  v.M = 2;
  CHECK(run_command(v).verdicts_pass);
}

TEST_CASE("configuration validation") {
  RunConfig bad = base("nope");
  CHECK_THROWS_AS((void)run_command(bad), std::invalid_argument);
  RunConfig bad_r = base("graph");
  bad_r.r = 0;
  CHECK_THROWS_AS((void)run_command(bad_r), std::invalid_argument);
  RunConfig bad_order = base("graph");
  bad_order.order = "sideways";
  CHECK_THROWS_AS((void)run_command(bad_order), std::invalid_argument);
}
