#pragma once

#include <string>
#include <vector>

#include "graph.hpp"

namespace cellia {

enum class OrderKind { PiStar, PiS };

/// Partial decode order: rank[v] is the stage at which v decodes (lower
/// first); nodes sharing a rank form a joint group and decode simultaneously.
struct DecodingOrder {
  OrderKind kind = OrderKind::PiStar;
  std::vector<int> rank;                       // per node id
  std::vector<std::vector<int>> joint_groups;  // one group per rank, rank order

  std::string to_json() const;
};

/// Raster order: higher imaginary part first, then smaller real part.
DecodingOrder order_pi_star(const InterferenceGraph& g);

/// Cell-diagonal order: cells are grouped on diagonals along 2+w and
/// processed from the upper-left; within a group primaries decode top-down,
/// then secondary pairs {b,c} decode jointly bottom-up. The constructed
/// order is validated against the raster order (identical out-of-cell edge
/// orientations) and throws internal_error if that fails.
DecodingOrder order_pi_s(const InterferenceGraph& g);

/// Ordered pair: transmitter tx interferes at receiver rx, rx decodes first.
struct DirectedEdge {
  int tx = -1;
  int rx = -1;
  friend bool operator==(const DirectedEdge& x, const DirectedEdge& y) {
    return x.tx == y.tx && x.rx == y.rx;
  }
  friend bool operator<(const DirectedEdge& x, const DirectedEdge& y) {
    return x.tx != y.tx ? x.tx < y.tx : x.rx < y.rx;
  }
};

enum class EdgeSelector { Out, Intra, Both };

/// Orients every selected undirected edge toward its earlier decoder;
/// equal-rank pairs (joint groups) produce no directed edge.
std::vector<DirectedEdge> orient_edges(const InterferenceGraph& g,
                                       const DecodingOrder& order,
                                       EdgeSelector selector);

}  // namespace cellia
