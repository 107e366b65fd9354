#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "channel.hpp"
#include "order.hpp"

namespace cellia {

/// Per-node transmit/receive bases. Columns of every V and U are
/// orthonormal; d[v] is the stream count (M/2 everywhere for even M,
/// (M-1)/2 or (M+1)/2 for odd M depending on augmentation).
struct BeamformerSet {
  int M = 0;
  std::vector<int> d;
  std::vector<CMat> V;  // M x d[v]
  std::vector<CMat> U;  // M x d[v]

  // Odd-M bookkeeping: nodes carrying the extra stream and the
  // pre-augmentation bases the construction started from.
  std::vector<int> augmented_nodes;
  std::vector<CMat> V_base;  // M x (M-1)/2
  std::vector<CMat> U_base;  // M x (M+1)/2

  // Which transmit rule produced V: 0 = random draw, 1/2/3 = the
  // square/circle/diamond chain rule.
  std::vector<int> transmit_rule;

  double average_streams() const;
};

/// Receiver -> list of interfering transmitters, sorted.
std::vector<std::vector<int>> in_edge_lists(int node_count,
                                            const std::vector<DirectedEdge>& edges);

/// The larger of the square/diamond coset classes (ties favor diamonds).
/// Validates that the set is independent and that no outside receiver hears
/// more than one member; throws internal_error otherwise.
std::vector<int> select_star_set(const InterferenceGraph& g,
                                 const std::vector<DirectedEdge>& directed_out);

/// One-shot alignment design over the raster-oriented out-of-cell edges.
/// Deterministic in (g, directed_out, channels, seed); never inspects any
/// compound state.
BeamformerSet design_beamformers(const InterferenceGraph& g,
                                 const std::vector<DirectedEdge>& directed_out,
                                 const ChannelSet& channels,
                                 std::uint64_t seed);

struct EdgeResidual {
  int tx = -1;
  int rx = -1;
  double residual = 0.0;  // ||U_rx^H H V_tx||_F / ||H||_F
};

struct AlignmentReport {
  double max_zero_forcing_residual = 0.0;
  double min_desired_sigma = std::numeric_limits<double>::infinity();
  std::vector<EdgeResidual> edges;
  std::vector<int> zero_forcing_violations;  // indices into edges
  std::vector<int> desired_violations;       // node ids
  bool ok = true;
};

/// Checks U_rx^H H V_tx = 0 on every directed edge and full-rank desired
/// links sigma_min(U^H H_vv V) > desired_tol on every node.
AlignmentReport verify_alignment(const InterferenceGraph& g,
                                 const std::vector<DirectedEdge>& directed,
                                 const ChannelSet& channels,
                                 const BeamformerSet& bf,
                                 double zf_tol = 1e-8,
                                 double desired_tol = 1e-6);

}  // namespace cellia
