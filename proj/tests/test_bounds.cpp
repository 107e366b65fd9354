#include <cmath>
#include <vector>

#include "beamformer.hpp"
#include "bounds.hpp"
#include "doctest.h"

using namespace cellia;

namespace {

// Independent oracle: plain enumeration of every stream assignment.
long long enumerate_q1(const InterferenceGraph& g, int M) {
  const int n = g.node_count();
  std::vector<int> d(static_cast<std::size_t>(n), 0);
  long long best = -1;
  for (;;) {
    bool ok = true;
    for (const auto& [u, v] : g.out_edges())
      if (d[static_cast<std::size_t>(u)] + d[static_cast<std::size_t>(v)] > M) ok = false;
    if (ok) {
      long long sum = 0;
      for (int x : d) sum += x;
      best = std::max(best, sum);
    }
    int i = 0;
    while (i < n && d[static_cast<std::size_t>(i)] == M) d[static_cast<std::size_t>(i++)] = 0;
    if (i == n) break;
    ++d[static_cast<std::size_t>(i)];
  }
  return best;
}

}  // namespace

TEST_CASE("triangle budget s*") {
  const std::vector<int> expected = {1, 3, 4, 6, 7, 9, 10, 12};
  for (int M = 1; M <= 8; ++M) {
    CHECK(s_star(M) == expected[static_cast<std::size_t>(M - 1)]);
    CHECK(brute_force_s_star(M) == s_star(M));
  }
  CHECK_THROWS_AS((void)s_star(0), std::invalid_argument);
}

TEST_CASE("upper bound at radius 1") {
  const auto g = build_graph(1);
  CHECK(achievable_upper_bound(g, 2) == doctest::Approx(15.0 / 7.0).epsilon(1e-15));
}

TEST_CASE("exact stream optimum matches plain enumeration") {
  const auto g = build_graph(1);
  for (int M : {1, 2, 3}) {
    const auto q1 = brute_force_q1(g, M);
    REQUIRE(q1.computed);
    CHECK(q1.opt_sum == enumerate_q1(g, M));
    // The assignment itself is feasible and attains the optimum.
    long long sum = 0;
    for (int d : q1.assignment) {
      CHECK(d >= 0);
      CHECK(d <= M);
      sum += d;
    }
    CHECK(sum == q1.opt_sum);
    for (const auto& [u, v] : g.out_edges())
      CHECK(q1.assignment[static_cast<std::size_t>(u)] +
                q1.assignment[static_cast<std::size_t>(v)] <=
            M);
  }
  CHECK(brute_force_q1(g, 2).opt_sum == 8);
}

TEST_CASE("branch and bound scales to radius 2 and refuses past the budget") {
  const auto g = build_graph(2);
  const auto q1 = brute_force_q1(g, 2);
  REQUIRE(q1.computed);
  CHECK(static_cast<double>(q1.opt_sum) <=
        achievable_upper_bound(g, 2) * g.node_count() + 1e-9);

  const auto starved = brute_force_q1(g, 2, 10);
  CHECK_FALSE(starved.computed);
}

TEST_CASE("q1 dominates the achieved average and respects the upper bound") {
  for (int M : {2, 3}) {
    const auto g = build_graph(2);
    const auto directed = orient_edges(g, order_pi_star(g), EdgeSelector::Out);
    const auto ch = sample_channels(g, M, 3);
    const auto bf = design_beamformers(g, directed, ch, 3);
    const auto q1 = brute_force_q1(g, M);
    REQUIRE(q1.computed);
    const double achieved = bf.average_streams() * g.node_count();
    CHECK(static_cast<double>(q1.opt_sum) + 1e-9 >= achieved);
    CHECK(bf.average_streams() <= achievable_upper_bound(g, M) + 1e-12);
  }
}

TEST_CASE("compound bound structure") {
  // For M=2 the diamond-anchored triangles tile the node set exactly:
  // 3|T^| + |Vex^| = |V|, so the printed bound is exactly one.
  for (int r = 1; r <= 8; ++r) {
    const auto g = build_graph(r);
    const auto b = compound_upper_bound(g, 2);
    CHECK(3 * b.hat_triangles + b.hat_exterior == g.node_count());
    CHECK(b.value == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(b.value_with_m >= b.value);

    std::vector<int> hits(g.nodes().size(), 0);
    for (const auto& t : b.triangles) {
      CHECK(coset_of(t.anchor) == Coset::Diamond);
      for (int m : t.members) ++hits[static_cast<std::size_t>(m)];
      const Eisenstein k0 = cell_key_of(g.node(t.members[0]).label);
      const Eisenstein k1 = cell_key_of(g.node(t.members[1]).label);
      const Eisenstein k2 = cell_key_of(g.node(t.members[2]).label);
      CHECK(k0 != k1);
      CHECK(k1 != k2);
      CHECK(k0 != k2);
    }
    for (int h : hits) CHECK(h <= 1);
  }
  // Radius 1: one diamond triangle {-w, 0, 1} and four uncovered nodes.
  const auto b1 = compound_upper_bound(build_graph(1), 2);
  CHECK(b1.hat_triangles == 1);
  CHECK(b1.hat_exterior == 4);
}

TEST_CASE("upper bound shrinks toward the interior value") {
  // For M=2: bound - 1 <= 7 / sqrt(|V|) for r = 2..12.
  for (int r = 2; r <= 12; ++r) {
    const auto g = build_graph(r);
    const double bound = achievable_upper_bound(g, 2);
    CHECK(bound - 1.0 <= 7.0 / std::sqrt(static_cast<double>(g.node_count())));
  }
}
