// Command-line front end for the cellia shared library. All functionality is
// reached through the C API in cellia.h.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cellia.h"

namespace {

// Relative output paths land in CELLIA_OUT_DIR when it is set.
std::string resolve_path(const std::string& path) {
  if (path.empty() || path.front() == '/') return path;
  const char* dir = std::getenv("CELLIA_OUT_DIR");
  if (dir != nullptr && *dir != '\0') return std::string(dir) + "/" + path;
  return path;
}

bool write_output(const std::string& path, const char* data) {
  if (path.empty()) {
    std::fputs(data, stdout);
    return true;
  }
  std::ofstream f(resolve_path(path), std::ios::binary);
  if (!f) {
    std::fprintf(stderr, "cellia: cannot open %s\n", path.c_str());
    return false;
  }
  f << data;
  return f.good();
}

struct Owned {
  char* s = nullptr;
  ~Owned() { cellia_string_free(s); }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cellia - sectored cellular interference alignment toolkit"};
  app.require_subcommand(1);

  int r = 2, M = 2, seeds = 1, trials = 1, random_states = 0;
  std::uint64_t seed = 1;
  std::vector<double> snr_db;
  std::string order, mode = "no-intra", output, csv_path, dot_path;
  std::string format = "json";
  bool no_intra = false, exact_q1 = false, exhaustive = false;
  bool no_timestamp = false, m_factor = false;

  auto add_common = [&](CLI::App* sub, bool with_m) {
    sub->add_option("-r,--r", r, "lattice radius")->check(CLI::PositiveNumber);
    if (with_m) sub->add_option("-M,--M", M, "antennas per node")->check(CLI::PositiveNumber);
    sub->add_option("--seed", seed, "base RNG seed");
    sub->add_option("--seeds", seeds, "number of consecutive seeds")->check(CLI::PositiveNumber);
    sub->add_option("-o,--output", output, "report path (default stdout; CELLIA_OUT_DIR applies)");
    sub->add_flag("--no-timestamp", no_timestamp, "omit generated_at from the report");
  };

  CLI::App* c_graph = app.add_subcommand("graph", "build the interference graph");
  add_common(c_graph, false);
  c_graph->add_flag("--no-intra", no_intra, "drop intra-cell edges");
  c_graph->add_option("--order", order, "orient the DOT drawing: pi-star or pi-s");
  c_graph->add_option("--format", format, "output artifact: json, dot or csv")
      ->check(CLI::IsMember({"json", "dot", "csv"}));

  CLI::App* c_design = app.add_subcommand("design", "synthesize alignment beamformers");
  add_common(c_design, true);

  CLI::App* c_sim = app.add_subcommand("simulate", "run the decode pipeline");
  add_common(c_sim, true);
  c_sim->add_option("--mode", mode, "no-intra, intra-joint or robust")
      ->check(CLI::IsMember({"no-intra", "intra-joint", "robust"}));
  c_sim->add_option("--snr-db", snr_db, "SNR grid in dB (noise variance 1)");
  c_sim->add_option("--trials", trials)->check(CLI::PositiveNumber);
  c_sim->add_option("--csv", csv_path, "write the per-node table here");

  CLI::App* c_bounds = app.add_subcommand("bounds", "converse bounds and exact small optima");
  add_common(c_bounds, true);
  c_bounds->add_flag("--exact-q1", exact_q1, "exact stream-assignment optimum");
  c_bounds->add_flag("--compound-m-factor", m_factor,
                     "use the M-weighted boundary term in the compound bound");

  CLI::App* c_robust = app.add_subcommand("robust", "compound-state robustness checks");
  add_common(c_robust, true);
  c_robust->add_flag("--exhaustive-neighborhood", exhaustive,
                     "sweep all 256 neighborhood configurations");
  c_robust->add_option("--random-states", random_states,
                       "full-network decodes under this many random masks");

  CLI::App* c_verify = app.add_subcommand("verify", "alignment, order and decode verification");
  add_common(c_verify, true);

  CLI::App* c_all = app.add_subcommand("all", "every check at one radius");
  add_common(c_all, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? 0 : 2;
  }

  cellia_run_config cfg;
  cellia_run_config_init(&cfg);
  const std::string command = app.get_subcommands().front()->get_name();
  cfg.command = command.c_str();
  cfg.r = r;
  cfg.M = M;
  cfg.seed = seed;
  cfg.seeds = seeds;
  cfg.order = order.c_str();
  cfg.mode = mode.c_str();
  if (snr_db.empty()) snr_db = {20.0};
  cfg.snr_db = snr_db.data();
  cfg.n_snr = static_cast<int>(snr_db.size());
  cfg.trials = trials;
  cfg.include_intra = no_intra ? 0 : 1;
  cfg.exact_q1 = exact_q1 ? 1 : 0;
  cfg.exhaustive_neighborhood = exhaustive ? 1 : 0;
  cfg.random_states = random_states;
  cfg.compound_m_factor = m_factor ? 1 : 0;
  cfg.emit_timestamp = no_timestamp ? 0 : 1;

  Owned report, csv, dot;
  const cellia_status st = cellia_run(&cfg, &report.s, &csv.s, &dot.s);
  if (st != CELLIA_OK && st != CELLIA_ERR_VERDICT_FAILED) {
    std::fprintf(stderr, "cellia: %s\n", cellia_last_error());
    return st == CELLIA_ERR_INVALID_ARGUMENT ? 2 : 3;
  }

  bool io_ok = true;
  if (command == "graph" && format != "json") {
    io_ok = write_output(output, format == "dot" ? dot.s : csv.s);
  } else {
    io_ok = write_output(output, report.s);
  }
  if (!csv_path.empty() && csv.s != nullptr) io_ok = write_output(csv_path, csv.s) && io_ok;
  if (!dot_path.empty() && dot.s != nullptr) io_ok = write_output(dot_path, dot.s) && io_ok;
  if (!io_ok) return 3;
  return st == CELLIA_OK ? 0 : 1;
}
