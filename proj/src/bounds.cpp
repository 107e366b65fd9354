#include "bounds.hpp"

#include <algorithm>
#include <stdexcept>

namespace cellia {

int s_star(int M) {
  if (M < 1) throw std::invalid_argument("s_star: M must be >= 1");
  return M % 2 == 0 ? 3 * M / 2 : (3 * M - 1) / 2;
}

int brute_force_s_star(int M) {
  if (M < 1 || M > 12) throw std::invalid_argument("brute_force_s_star: M out of budget");
  int best = 0;
  for (int i = 0; i <= M; ++i)
    for (int j = 0; j <= M; ++j)
      for (int k = 0; k <= M; ++k)
        if (i + j <= M && j + k <= M && k + i <= M) best = std::max(best, i + j + k);
  return best;
}

double achievable_upper_bound(const InterferenceGraph& g, int M) {
  const double nV = static_cast<double>(g.node_count());
  const double nT = static_cast<double>(g.triangles().size());
  const double nVex = static_cast<double>(g.classification().exterior.size());
  return nT * s_star(M) / (2.0 * nV) + M * nVex / nV;
}

namespace {

struct Q1Search {
  const InterferenceGraph& g;
  const int M;
  const long long budget;
  const int n;
  std::vector<std::vector<int>> later_neighbors;  // out-neighbors with larger id
  std::vector<int> cap;
  std::vector<int> current;
  std::vector<int> best_assignment;
  long long best = -1;
  long long explored = 0;
  bool aborted = false;
  std::vector<long long> suffix_bound;  // triangle-decomposition bound on ids >= i

  Q1Search(const InterferenceGraph& graph, int antennas, long long node_budget)
      : g(graph), M(antennas), budget(node_budget), n(graph.node_count()) {
    later_neighbors.resize(static_cast<std::size_t>(n));
    for (const auto& [u, v] : g.out_edges())
      later_neighbors[static_cast<std::size_t>(u)].push_back(v);  // u < v by construction
    cap.assign(static_cast<std::size_t>(n), M);
    current.assign(static_cast<std::size_t>(n), 0);

    // Suffix bound: sum_{v>=i} d_v decomposes over triangles fully inside the
    // suffix; each such triangle contributes at most s*/2 and the leftovers
    // at most M each.
    suffix_bound.assign(static_cast<std::size_t>(n) + 1, 0);
    const double star = s_star(M);
    for (int i = n; i >= 0; --i) {
      std::vector<int> membership(static_cast<std::size_t>(n), 0);
      int tri = 0;
      for (const auto& t : g.triangles()) {
        if (t.members[0] >= i && t.members[1] >= i && t.members[2] >= i) {
          ++tri;
          for (int m : t.members) ++membership[static_cast<std::size_t>(m)];
        }
      }
      double bound = tri * star / 2.0;
      for (int v = i; v < n; ++v)
        bound += (1.0 - membership[static_cast<std::size_t>(v)] / 2.0) * M;
      suffix_bound[static_cast<std::size_t>(i)] = static_cast<long long>(bound + 1e-9);
    }
  }

  void dfs(int i, long long sum, long long cap_suffix) {
    if (aborted) return;
    if (++explored > budget) {
      aborted = true;
      return;
    }
    if (i == n) {
      if (sum > best) {
        best = sum;
        best_assignment = current;
      }
      return;
    }
    const long long ub = sum + std::min(cap_suffix, suffix_bound[static_cast<std::size_t>(i)]);
    if (ub <= best) return;
    const int ci = cap[static_cast<std::size_t>(i)];
    for (int d = ci; d >= 0; --d) {
      current[static_cast<std::size_t>(i)] = d;
      // Tighten later neighbors to M - d, remembering what changed.
      std::vector<std::pair<int, int>> undo;
      long long next_cap_suffix = cap_suffix - ci;
      bool feasible = true;
      for (int v : later_neighbors[static_cast<std::size_t>(i)]) {
        const int limit = M - d;
        if (cap[static_cast<std::size_t>(v)] > limit) {
          undo.emplace_back(v, cap[static_cast<std::size_t>(v)]);
          next_cap_suffix -= cap[static_cast<std::size_t>(v)] - limit;
          cap[static_cast<std::size_t>(v)] = limit;
        }
        if (limit < 0) feasible = false;
      }
      if (feasible) dfs(i + 1, sum + d, next_cap_suffix);
      for (auto& [v, old] : undo) cap[static_cast<std::size_t>(v)] = old;
      if (aborted) return;
    }
    current[static_cast<std::size_t>(i)] = 0;
  }
};

}  // namespace

Q1Result brute_force_q1(const InterferenceGraph& g, int M, long long node_budget) {
  if (M < 1) throw std::invalid_argument("brute_force_q1: M must be >= 1");
  Q1Search search(g, M, node_budget);
  long long cap0 = 0;
  for (int c : search.cap) cap0 += c;
  search.dfs(0, 0, cap0);
  Q1Result r;
  r.explored = search.explored;
  if (search.aborted) return r;  // computed = false
  r.computed = true;
  r.opt_sum = search.best;
  r.assignment = search.best_assignment;
  return r;
}

CompoundBound compound_upper_bound(const InterferenceGraph& g, int M) {
  CompoundBound b;
  for (const auto& t : g.triangles())
    if (coset_of(t.anchor) == Coset::Diamond) b.triangles.push_back(t);
  b.hat_triangles = static_cast<long long>(b.triangles.size());

  std::vector<char> covered(g.nodes().size(), 0);
  for (const auto& t : b.triangles)
    for (int m : t.members) covered[static_cast<std::size_t>(m)] = 1;
  for (const auto& n : g.nodes())
    if (!covered[static_cast<std::size_t>(n.id)]) ++b.hat_exterior;

  const double nV = static_cast<double>(g.node_count());
  const double star = s_star(M);
  b.value = b.hat_triangles * star / nV + b.hat_exterior / nV;
  b.value_with_m = b.hat_triangles * star / nV + M * b.hat_exterior / nV;
  return b;
}

}  // namespace cellia
