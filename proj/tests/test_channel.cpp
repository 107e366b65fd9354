#include "channel.hpp"
#include "doctest.h"

using namespace cellia;

TEST_CASE("sampling is deterministic in the seed") {
  const auto g = build_graph(2);
  const auto a = sample_channels(g, 2, 42);
  const auto b = sample_channels(g, 2, 42);
  for (int v = 0; v < g.node_count(); ++v) CHECK(a.direct(v) == b.direct(v));
  for (const auto& [key, h] : a.cross_links()) CHECK(h == b.cross(key.first, key.second));

  const auto c = sample_channels(g, 2, 43);
  CHECK((a.direct(0) - c.direct(0)).norm() > 0.0);
}

TEST_CASE("both orientations of every edge carry a matrix") {
  const auto g = build_graph(2);
  const auto ch = sample_channels(g, 3, 7);
  for (const auto& [u, v] : g.out_edges()) {
    CHECK(ch.has_cross(u, v));
    CHECK(ch.has_cross(v, u));
    CHECK((ch.cross(u, v) - ch.cross(v, u)).norm() > 0.0);  // independent draws
  }
  for (const auto& [u, v] : g.intra_edges()) {
    CHECK(ch.has_cross(u, v));
    CHECK(ch.has_cross(v, u));
  }
  CHECK_THROWS_AS((void)ch.cross(0, 0), std::invalid_argument);
  CHECK_THROWS_AS((void)sample_channels(g, 0, 1), std::invalid_argument);
}

TEST_CASE("gaussian matrices are invertible across seeds") {
  const auto g = build_graph(2);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto ch = sample_channels(g, 2, seed);
    for (int v = 0; v < g.node_count(); ++v)
      CHECK(sigma_min(ch.direct(v)) > 1e-9);
    for (const auto& [key, h] : ch.cross_links()) CHECK(sigma_min(h) > 1e-9);
  }
}

TEST_CASE("compound masks") {
  const auto g = build_graph(1);
  const auto ch = sample_channels(g, 2, 5);

  const auto ones = CompoundState::all_ones(ch);
  const auto same = apply_compound(ch, ones);
  for (const auto& [key, h] : ch.cross_links())
    CHECK(h == same.cross(key.first, key.second));

  const auto zeros = CompoundState::all_zeros(ch);
  const auto dark = apply_compound(ch, zeros);
  for (const auto& [key, h] : dark.cross_links()) CHECK(h.norm() == 0.0);
  for (int v = 0; v < g.node_count(); ++v) CHECK(dark.direct(v) == ch.direct(v));

  // Clearing a single bit zeroes exactly one matrix.
  CompoundState one_off = ones;
  const LinkKey victim = ch.cross_links().begin()->first;
  one_off.alpha[victim] = 0;
  const auto masked = apply_compound(ch, one_off);
  int zeroed = 0;
  for (const auto& [key, h] : masked.cross_links())
    if (h.norm() == 0.0) ++zeroed;
  CHECK(zeroed == 1);
  CHECK(masked.cross(victim.first, victim.second).norm() == 0.0);

  // Idempotent.
  const auto twice = apply_compound(masked, one_off);
  for (const auto& [key, h] : twice.cross_links())
    CHECK(h == masked.cross(key.first, key.second));

  CompoundState mismatched = ones;
  mismatched.alpha.erase(victim);
  CHECK_THROWS_AS((void)apply_compound(ch, mismatched), std::invalid_argument);
}
