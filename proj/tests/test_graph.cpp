#include <algorithm>
#include <set>

#include "doctest.h"
#include "graph.hpp"
#include "rng.hpp"

using namespace cellia;

namespace {

std::pair<int, int> ids(const InterferenceGraph& g, Eisenstein u, Eisenstein v) {
  const int a = g.node_id(u);
  const int b = g.node_id(v);
  REQUIRE(a >= 0);
  REQUIRE(b >= 0);
  return {std::min(a, b), std::max(a, b)};
}

}  // namespace

TEST_CASE("radius-1 census: nodes, edges, ids in raster order") {
  const auto g = build_graph(1);
  REQUIRE(g.node_count() == 7);
  CHECK(g.out_edges().size() == 8);
  CHECK(g.intra_edges().size() == 4);

  // Raster order: w, 1+w, -1, 0, 1, -1-w, -w.
  const std::vector<Eisenstein> expected = {{0, 1}, {1, 1}, {-1, 0}, {0, 0},
                                            {1, 0}, {-1, -1}, {0, -1}};
  for (int i = 0; i < 7; ++i) {
    CHECK(g.node(i).label == expected[static_cast<std::size_t>(i)]);
    CHECK(g.node_id(expected[static_cast<std::size_t>(i)]) == i);
  }

  // Hand enumeration of the radius-1 edge sets.
  std::set<std::pair<int, int>> out(g.out_edges().begin(), g.out_edges().end());
  const std::set<std::pair<int, int>> expected_out = {
      ids(g, {-1, 0}, {0, 0}),   ids(g, {0, 0}, {1, 0}),
      ids(g, {1, 0}, {1, 1}),    ids(g, {0, -1}, {0, 0}),
      ids(g, {-1, -1}, {-1, 0}), ids(g, {-1, -1}, {0, 0}),
      ids(g, {0, -1}, {1, 0}),   ids(g, {-1, 0}, {0, 1})};
  CHECK(out == expected_out);

  std::set<std::pair<int, int>> intra(g.intra_edges().begin(), g.intra_edges().end());
  const std::set<std::pair<int, int>> expected_intra = {
      ids(g, {-1, -1}, {0, -1}), ids(g, {0, 1}, {1, 1}),
      ids(g, {0, 0}, {0, 1}),    ids(g, {0, 0}, {1, 1})};
  CHECK(intra == expected_intra);

  // No duplicates, no overlap, no self-loops.
  CHECK(out.size() == g.out_edges().size());
  CHECK(intra.size() == g.intra_edges().size());
  for (const auto& e : out) CHECK(intra.count(e) == 0);
}

TEST_CASE("include_intra=false drops only the intra edges") {
  const auto g = build_graph(1, false);
  CHECK(g.out_edges().size() == 8);
  CHECK(g.intra_edges().empty());
}

TEST_CASE("radius-1 triangles and vertex classification") {
  const auto g = build_graph(1);
  REQUIRE(g.triangles().size() == 2);
  CHECK(g.triangles()[0].anchor == Eisenstein{-1, -1});
  CHECK(g.triangles()[1].anchor == Eisenstein{0, -1});
  for (const auto& t : g.triangles())
    CHECK(coset_of(t.anchor) != Coset::Square);

  const auto& cls = g.classification();
  CHECK(cls.interior == std::vector<int>{g.node_id({0, 0})});
  CHECK(cls.exterior.size() == 6);
  CHECK(cls.n_v[static_cast<std::size_t>(g.node_id({0, 0}))] == 2);
}

TEST_CASE("radius-1 cells") {
  const auto g = build_graph(1);
  const auto& cells = g.cells();
  REQUIRE(cells.size() == 3);

  // z = w: full cell {a=w, b=1+w, c=0} with external d = -1.
  const Cell& cw = cells[0];
  CHECK(cw.key == Eisenstein{0, 1});
  CHECK(cw.primary == g.node_id({0, 1}));
  CHECK(cw.secondary_b == g.node_id({1, 1}));
  CHECK(cw.secondary_c == g.node_id({0, 0}));
  CHECK(cw.external_d == g.node_id({-1, 0}));
  CHECK(cw.full());

  // z = 1: only the primary survives; d = -w is in-region.
  const Cell& c1 = cells[1];
  CHECK(c1.key == Eisenstein{1, 0});
  CHECK(c1.primary == g.node_id({1, 0}));
  CHECK(c1.secondary_b == -1);
  CHECK(c1.secondary_c == -1);
  CHECK(c1.external_d == g.node_id({0, -1}));

  // z = -1-w: {a, b} truncated pair.
  const Cell& c2 = cells[2];
  CHECK(c2.primary == g.node_id({-1, -1}));
  CHECK(c2.secondary_b == g.node_id({0, -1}));
  CHECK(c2.secondary_c == -1);
  CHECK(c2.external_d == -1);
}

TEST_CASE("full cells carry their three intra edges") {
  for (int r : {1, 2, 3, 4}) {
    const auto g = build_graph(r);
    std::set<std::pair<int, int>> intra(g.intra_edges().begin(), g.intra_edges().end());
    for (const auto& c : g.cells()) {
      if (!c.full()) continue;
      auto edge = [](int x, int y) { return std::make_pair(std::min(x, y), std::max(x, y)); };
      CHECK(intra.count(edge(c.primary, c.secondary_b)) == 1);
      CHECK(intra.count(edge(c.primary, c.secondary_c)) == 1);
      CHECK(intra.count(edge(c.secondary_b, c.secondary_c)) == 1);
    }
  }
}

TEST_CASE("closed forms match enumeration for r = 1..20") {
  CHECK(cardinality_formulas(1).n_nodes == 7);
  CHECK(cardinality_formulas(1).n_triangles == 2);
  CHECK(cardinality_formulas(1).vex_bound == 14);
  CHECK(cardinality_formulas(2).n_nodes == 23);
  CHECK(cardinality_formulas(2).n_triangles == 8);
  CHECK(cardinality_formulas(4).n_nodes == 77);
  for (int r = 1; r <= 20; ++r) {
    const auto g = build_graph(r);
    const auto f = cardinality_formulas(r);
    CHECK(g.node_count() == f.n_nodes);
    CHECK(static_cast<long long>(g.triangles().size()) == f.n_triangles);
    CHECK(static_cast<long long>(g.classification().exterior.size()) <= f.vex_bound);
    CHECK(3 * static_cast<long long>(g.triangles().size()) <= 2 * f.n_nodes);
  }
}

TEST_CASE("out edges connect distinct cosets; intra edges connect same cells") {
  for (int r : {1, 2, 3, 5}) {
    const auto g = build_graph(r);
    for (const auto& [u, v] : g.out_edges()) {
      CHECK(g.node(u).coset != g.node(v).coset);
      CHECK_FALSE(g.node(u).coset == Coset::Circle && g.node(v).coset == Coset::Circle);
    }
    for (const auto& [u, v] : g.intra_edges())
      CHECK(cell_key_of(g.node(u).label) == cell_key_of(g.node(v).label));
  }
}

TEST_CASE("triangle-sum identity") {
  const auto g1 = build_graph(1);
  const std::vector<double> zeros(7, 0.0);
  auto [l0, r0] = triangle_sum_check(g1, zeros);
  CHECK(l0 == 0.0);
  CHECK(r0 == 0.0);

  const std::vector<double> ones(7, 1.0);
  auto [l1, r1] = triangle_sum_check(g1, ones);
  CHECK(l1 == doctest::Approx(7.0));
  CHECK(r1 == doctest::Approx(7.0).epsilon(1e-14));

  SplitMix64 rng(5);
  for (int r = 1; r <= 6; ++r) {
    const auto g = build_graph(r);
    std::vector<double> x(g.nodes().size());
    for (auto& xv : x) xv = 2.0 * rng.uniform() - 1.0;
    const auto [lhs, rhs] = triangle_sum_check(g, x);
    CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max({1.0, std::abs(lhs), std::abs(rhs)}));
  }
}

TEST_CASE("exports") {
  const auto g = build_graph(2);
  const std::string dot = g.to_dot();
  std::size_t shapes = 0;
  for (std::size_t p = dot.find("shape="); p != std::string::npos; p = dot.find("shape=", p + 1))
    ++shapes;
  CHECK(shapes == 23);
  CHECK(dot.find("style=dashed") != std::string::npos);
  CHECK(dot.rfind("graph", 0) == 0);

  const std::string js = g.to_json();
  CHECK(js.find("\"out_edges\"") != std::string::npos);
  CHECK(js.find("\"intra_edges\"") != std::string::npos);

  CHECK_THROWS_AS((void)build_graph(0), std::invalid_argument);
}
