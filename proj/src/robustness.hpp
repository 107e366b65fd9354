#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "simulate.hpp"

namespace cellia {

/// One Monte-Carlo draw for the masked full-rank lemma: Gaussian H, unit
/// diagonal binary mask, full rank of mask∘H. Throws on a zero diagonal.
bool hadamard_full_rank_trial(int n, const std::vector<std::vector<int>>& mask,
                              std::uint64_t seed);

/// Compound bits in the fixed order [ab, ac, ad, ba, bc, ca, cb, cd].
using AlphaBits = std::array<int, 8>;

inline AlphaBits alpha_bits_from_config(int config) {
  AlphaBits b{};
  for (int i = 0; i < 8; ++i) b[static_cast<std::size_t>(i)] = (config >> i) & 1;
  return b;
}

/// First matching case: (1) no c-d link, (2) a hears d, else (3)/(4) split
/// on whether a hears both of its in-cell interferers.
int classify_case(const AlphaBits& alpha);

enum class SweepMode { PiSRobust, PiStarJoint };

struct NeighborhoodSweep {
  int configs_tested = 0;
  struct Failure {
    int config = 0;
    int node = -1;
  };
  std::vector<Failure> failures;
  std::array<int, 4> case_histogram{};  // counts per case 1..4
  bool case_oracle_agrees = true;       // M=2 recipe vs unified rowspan solve
  double min_pair_sigma = 0.0;          // worst secondary-pair conditioning
  double max_pair_sigma = 0.0;
};

/// Enumerates all 256 presence masks on the links between a full cell
/// {a,b,c} and its external neighbor d, with all out-of-neighborhood
/// interference already aligned away or cancelled (the alignment residual is
/// asserted first). PiSRobust decodes the primary via the stacked rowspan
/// solve and the pair after d; PiStarJoint requires the full joint system.
NeighborhoodSweep sweep_neighborhood(const InterferenceGraph& g, const ChannelSet& channels,
                                     const BeamformerSet& bf, const Cell& cell,
                                     SweepMode mode);

/// Full-network decode under an explicit compound state with the pi-s order.
SimulationResult simulate_robust_full(const InterferenceGraph& g, const ChannelSet& channels,
                                      const BeamformerSet& bf, const SimulationConfig& cfg,
                                      const CompoundState& state, AccessLog* log = nullptr);

}  // namespace cellia
