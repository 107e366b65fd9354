#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "lattice.hpp"

namespace cellia {

struct SectorNode {
  int id = -1;          // dense index, assigned in raster (pi-star) order
  Eisenstein label;
  Coset coset = Coset::Square;
};

/// Connected vertex triple [z, z+w, z+w+1] whose anchor has nonzero coset.
struct Triangle {
  Eisenstein anchor;
  std::array<int, 3> members;  // node ids of z, z+w, z+w+1
};

/// Cell keyed by its circle label z: members a=z, b=z+1, c=z-w and the
/// out-of-cell neighbor d=z-w-1. Absent members are -1.
struct Cell {
  Eisenstein key;
  int primary = -1;      // a (circle)
  int secondary_b = -1;  // z + 1 (diamond)
  int secondary_c = -1;  // z - w (square)
  int external_d = -1;   // z - w - 1 (diamond, belongs to another cell)
  bool full() const { return primary >= 0 && secondary_b >= 0 && secondary_c >= 0; }
};

struct VertexClassification {
  std::vector<int> n_v;        // triangle-membership count per node
  std::vector<int> interior;   // ids with n_v == 2
  std::vector<int> exterior;   // ids with n_v < 2
};

struct CardinalityFormulas {
  long long n_nodes = 0;
  long long n_triangles = 0;
  long long vex_bound = 0;  // 12r + 2
};

/// Which cell a node belongs to, as the cell's circle label (which may lie
/// outside the region for boundary secondaries).
Eisenstein cell_key_of(Eisenstein label);

class InterferenceGraph {
 public:
  using Edge = std::pair<int, int>;  // node ids, first < second

  int radius() const { return r_; }
  bool has_intra() const { return include_intra_; }

  const std::vector<SectorNode>& nodes() const { return nodes_; }
  const std::vector<Edge>& out_edges() const { return out_edges_; }
  const std::vector<Edge>& intra_edges() const { return intra_edges_; }

  int node_count() const { return static_cast<int>(nodes_.size()); }
  /// Node id for a lattice label, or -1 when outside the region.
  int node_id(Eisenstein z) const;
  const SectorNode& node(int id) const { return nodes_[static_cast<std::size_t>(id)]; }

  const std::vector<Triangle>& triangles() const { return triangles_; }
  const VertexClassification& classification() const { return classification_; }
  /// One cell per in-region circle label, in primary id order.
  const std::vector<Cell>& cells() const { return cells_; }

  /// Neighbor ids over out (0), intra (1), or both edge sets.
  const std::vector<int>& out_neighbors(int id) const { return out_adj_[static_cast<std::size_t>(id)]; }
  const std::vector<int>& intra_neighbors(int id) const { return intra_adj_[static_cast<std::size_t>(id)]; }
  bool adjacent(int u, int v) const;

  std::string to_json() const;
  /// DOT export; when ranks are given edges are oriented toward the earlier
  /// decoder and equal ranks stay undirected.
  std::string to_dot(const std::vector<int>* ranks = nullptr) const;

  friend InterferenceGraph build_graph(int r, bool include_intra);

 private:
  int r_ = 0;
  bool include_intra_ = true;
  std::vector<SectorNode> nodes_;
  std::unordered_map<Eisenstein, int, EisensteinHash> index_;
  std::vector<Edge> out_edges_;
  std::vector<Edge> intra_edges_;
  std::vector<std::vector<int>> out_adj_;
  std::vector<std::vector<int>> intra_adj_;
  std::vector<Triangle> triangles_;
  VertexClassification classification_;
  std::vector<Cell> cells_;
};

/// Builds nodes, edges, triangles, classification and cells for radius r.
/// Throws std::invalid_argument when r < 1.
InterferenceGraph build_graph(int r, bool include_intra = true);

/// Closed forms: node count, triangle count, and the exterior-vertex bound.
CardinalityFormulas cardinality_formulas(int r);

/// Triangle-sum identity: returns (sum of x, triangle decomposition of the
/// same sum). The two sides agree up to float roundoff.
std::pair<double, double> triangle_sum_check(const InterferenceGraph& g,
                                             const std::vector<double>& x);

}  // namespace cellia
