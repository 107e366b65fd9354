#pragma once

#include <vector>

#include "graph.hpp"

namespace cellia {

/// Largest triangle sum under pairwise stream constraints: 3M/2 for even M,
/// (3M-1)/2 for odd M.
int s_star(int M);

/// Exhaustive check over {0..M}^3 with all pairwise sums <= M.
int brute_force_s_star(int M);

/// (nT * s*) / (2 nV) + M * nVex / nV over the graph's actual census.
double achievable_upper_bound(const InterferenceGraph& g, int M);

struct Q1Result {
  bool computed = false;  // false when the enumeration budget was exceeded
  long long opt_sum = 0;
  std::vector<int> assignment;
  long long explored = 0;
};

/// Exact maximum of sum(d_v) with d_v in {0..M} and d_u + d_v <= M on every
/// out-of-cell edge. Depth-first branch and bound in raster order with a
/// triangle-decomposition suffix bound; refuses past the node budget.
Q1Result brute_force_q1(const InterferenceGraph& g, int M,
                        long long node_budget = 50'000'000);

struct CompoundBound {
  double value = 0.0;         // (|T^|/|V|) s* + |Vex^|/|V|, printed form
  double value_with_m = 0.0;  // variant carrying the M factor on the boundary term
  long long hat_triangles = 0;
  long long hat_exterior = 0;
  std::vector<Triangle> triangles;  // diamond-anchored triangle set
};

/// Converse for the compound network: keep only the diamond-anchored
/// triangles (whose members lie in three distinct cells), count the nodes
/// they miss, and bound the per-sector average.
CompoundBound compound_upper_bound(const InterferenceGraph& g, int M);

}  // namespace cellia
