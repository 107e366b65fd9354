#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace cellia {

/// Parsed command configuration shared by the C API and the CLI.
struct RunConfig {
  std::string command = "graph";  // graph|design|simulate|bounds|robust|verify|all
  int r = 2;
  int M = 2;
  std::uint64_t seed = 1;
  int seeds = 1;  // consecutive seeds starting at `seed` for multi-seed commands
  std::string order;  // "pi-star" | "pi-s"; empty = command default
  std::string mode = "no-intra";  // no-intra | intra-joint | robust
  std::vector<double> snr_db = {20.0};
  int trials = 1;
  bool include_intra = true;
  bool exact_q1 = false;
  bool exhaustive_neighborhood = false;
  int random_states = 0;
  bool compound_m_factor = false;
  bool emit_timestamp = true;
};

struct RunOutput {
  std::string report_json;
  std::string csv;  // per-node table where applicable
  std::string dot;  // graph command only
  bool verdicts_pass = true;
};

/// Executes one subcommand and assembles its deterministic JSON report
/// (config echo, seed, library version, results, verdicts). Throws
/// std::invalid_argument on bad configuration.
RunOutput run_command(const RunConfig& cfg);

const char* library_name();
const char* library_version();

}  // namespace cellia
