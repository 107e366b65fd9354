#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "beamformer.hpp"

namespace cellia {

enum class SimMode { NoIntraCell, IntraCellJoint, RobustPiS };
enum class SymbolModel { UnitGaussian, Qpsk };

struct SimulationConfig {
  double power = 1.0;           // linear per-user transmit power
  double noise_variance = 0.0;  // per antenna; 0 = noiseless verification mode
  SymbolModel symbols = SymbolModel::UnitGaussian;
  SimMode mode = SimMode::NoIntraCell;
  double tolerance = 1e-6;  // exact-decode check in noiseless mode
  int trials = 1;
  std::uint64_t seed = 1;
};

struct NodeResult {
  bool decoded = true;
  double symbol_error = 0.0;  // worst component error across trials
  double effective_sigma_min = std::numeric_limits<double>::infinity();
  double rate_bits = 0.0;  // log2 det(I + (P/d) Heff Heff^H), unit noise
};

struct SimulationResult {
  std::vector<NodeResult> per_node;
  double avg_rate = 0.0;
  double avg_dof_estimate = 0.0;  // mean rate slope between P and 100P
  double max_alignment_residual = 0.0;
  int failed_nodes = 0;
  bool all_decoded = true;
};

/// Instrumentation: one entry per decoded-message read (reader, source).
struct AccessLog {
  std::vector<std::pair<int, int>> reads;
};

/// Walks the decode order: each step cancels the reconstructed signals of
/// previously decoded neighbors, zero-forces the aligned remainder, and
/// solves for its own streams. Message passing is strictly local (the log
/// proves it). The three modes differ in which edges exist in the received
/// signal and how cells cooperate.
SimulationResult simulate(const InterferenceGraph& g, const DecodingOrder& order,
                          const ChannelSet& channels, const BeamformerSet& bf,
                          const SimulationConfig& cfg,
                          const CompoundState* state = nullptr,
                          AccessLog* log = nullptr);

/// Stacked least-squares system for one cell: rows are the primary's raw
/// observation plus each secondary's projected observation; unknown column
/// blocks are the undecoded members (plus the external d when present).
struct CellSystem {
  CMat matrix;
  CVec observation;
  std::vector<int> block_node;  // per unknown block, node id
  std::vector<int> block_offset;
  std::vector<int> block_size;

  int block_of(int node) const;
};

/// Pseudo-inverse path: per-block symbol estimates. ok requires full column
/// rank of the stacked matrix.
struct JointDecodeResult {
  std::vector<CVec> symbols;  // per block
  bool ok = false;
  double system_sigma_min = 0.0;
};
JointDecodeResult joint_cell_decode(const CellSystem& sys);

/// Successive path for square systems: QL factorization, then forward
/// substitution decodes the blocks in order. Agrees with the LS path.
std::vector<CVec> ql_successive_decode(const CellSystem& sys);

/// High-SNR rate slope per node between powers P1 and P2 (unit noise); the
/// slope approaches the per-node stream count.
std::vector<double> estimate_dof_slopes(const InterferenceGraph& g,
                                        const ChannelSet& channels,
                                        const BeamformerSet& bf, double p1, double p2);

double rate_bits_at(const CMat& effective, double power, int streams);

}  // namespace cellia
