#include <algorithm>

#include "doctest.h"
#include "simulate.hpp"

using namespace cellia;

namespace {

struct Setup {
  InterferenceGraph g;
  std::vector<DirectedEdge> directed;
  ChannelSet ch;
  BeamformerSet bf;
};

Setup make(int r, int M, std::uint64_t seed) {
  Setup s{build_graph(r), {}, {}, {}};
  s.directed = orient_edges(s.g, order_pi_star(s.g), EdgeSelector::Out);
  s.ch = sample_channels(s.g, M, seed);
  s.bf = design_beamformers(s.g, s.directed, s.ch, seed);
  return s;
}

SimulationResult run(const Setup& s, SimMode mode, const CompoundState* state = nullptr,
                     AccessLog* log = nullptr, int trials = 1) {
  SimulationConfig cfg;
  cfg.mode = mode;
  cfg.trials = trials;
  cfg.seed = 99;
  const DecodingOrder order =
      mode == SimMode::RobustPiS ? order_pi_s(s.g) : order_pi_star(s.g);
  return simulate(s.g, order, s.ch, s.bf, cfg, state, log);
}

}  // namespace

TEST_CASE("noiseless decode succeeds in all three pipelines") {
  // r=3 exercises the boundary pair whose primary circle lies outside the
  // region; r=4 is the dense case.
  for (int r : {3, 4}) {
    for (int M : {2, 3}) {
      const auto s = make(r, M, 7);
      for (SimMode mode :
           {SimMode::NoIntraCell, SimMode::IntraCellJoint, SimMode::RobustPiS}) {
        CompoundState ones = CompoundState::all_ones(s.ch);
        const auto res =
            run(s, mode, mode == SimMode::RobustPiS ? &ones : nullptr);
        INFO("r=", r, " M=", M, " mode=", static_cast<int>(mode));
        CHECK(res.all_decoded);
        for (const auto& nr : res.per_node) CHECK(nr.symbol_error <= 1e-6);
        CHECK(res.max_alignment_residual <= 1e-8);
      }
    }
  }
}

TEST_CASE("radius-1 truncated cells reduce to single-node decodes") {
  const auto s = make(1, 2, 5);
  const auto res = run(s, SimMode::IntraCellJoint, nullptr, nullptr, 2);
  CHECK(res.all_decoded);
}

TEST_CASE("message passing is local and respects the order") {
  const auto s = make(3, 2, 11);
  for (SimMode mode : {SimMode::NoIntraCell, SimMode::IntraCellJoint}) {
    AccessLog log;
    const auto res = run(s, mode, nullptr, &log);
    CHECK(res.all_decoded);
    CHECK_FALSE(log.reads.empty());
    const auto order = order_pi_star(s.g);
    for (const auto& [reader, source] : log.reads) {
      CHECK(s.g.adjacent(reader, source));
      CHECK(order.rank[static_cast<std::size_t>(source)] <
            order.rank[static_cast<std::size_t>(reader)]);
    }
  }
}

TEST_CASE("joint pipeline equals the plain one when intra edges are absent") {
  Setup s{build_graph(3, false), {}, {}, {}};
  s.directed = orient_edges(s.g, order_pi_star(s.g), EdgeSelector::Out);
  s.ch = sample_channels(s.g, 2, 13);
  s.bf = design_beamformers(s.g, s.directed, s.ch, 13);
  const auto plain = run(s, SimMode::NoIntraCell);
  const auto joint = run(s, SimMode::IntraCellJoint);
  CHECK(plain.all_decoded);
  CHECK(joint.all_decoded);
  for (std::size_t i = 0; i < plain.per_node.size(); ++i) {
    CHECK(plain.per_node[i].decoded == joint.per_node[i].decoded);
    CHECK(plain.per_node[i].rate_bits == doctest::Approx(joint.per_node[i].rate_bits));
  }
}

TEST_CASE("configuration validation") {
  const auto s = make(1, 2, 3);
  SimulationConfig cfg;
  cfg.power = 0.0;
  CHECK_THROWS_AS((void)simulate(s.g, order_pi_star(s.g), s.ch, s.bf, cfg),
                  std::invalid_argument);
  SimulationConfig cfg2;
  cfg2.mode = SimMode::RobustPiS;  // wrong order kind
  CHECK_THROWS_AS((void)simulate(s.g, order_pi_star(s.g), s.ch, s.bf, cfg2),
                  std::invalid_argument);
  SimulationConfig cfg3;
  cfg3.noise_variance = -1.0;
  CHECK_THROWS_AS((void)simulate(s.g, order_pi_star(s.g), s.ch, s.bf, cfg3),
                  std::invalid_argument);
}

TEST_CASE("successive QL path agrees with the pseudo-inverse path") {
  // Square 4x4 system with the full-cell zero pattern (b never hears d).
  SplitMix64 rng(17);
  CellSystem sys;
  sys.block_node = {0, 1, 2, 3};
  sys.block_offset = {0, 1, 2, 3};
  sys.block_size = {1, 1, 1, 1};
  CMat h = random_gaussian(4, 4, rng);
  h(2, 3) = 0.0;  // the b-row d-column
  sys.matrix = h;
  const CVec truth = random_gaussian(4, 1, rng);
  sys.observation = h * truth;

  const auto ls = joint_cell_decode(sys);
  REQUIRE(ls.ok);
  const auto ql = ql_successive_decode(sys);
  for (int i = 0; i < 4; ++i) {
    CHECK(std::abs(ls.symbols[static_cast<std::size_t>(i)](0) - truth(i)) <= 1e-8);
    CHECK(std::abs(ql[static_cast<std::size_t>(i)](0) -
                   ls.symbols[static_cast<std::size_t>(i)](0)) <= 1e-8);
  }
}

TEST_CASE("rate slopes approach the stream counts") {
  const auto s = make(3, 2, 19);
  const auto slopes = estimate_dof_slopes(s.g, s.ch, s.bf, 1e4, 1e6);
  double avg = 0.0;
  for (double v : slopes) avg += v;
  avg /= static_cast<double>(slopes.size());
  CHECK(avg == doctest::Approx(1.0).epsilon(0.05));

  // A dead desired channel has zero slope.
  auto ch = s.ch;
  ch.mutable_direct()[0] = CMat::Zero(2, 2);
  const auto slopes2 = estimate_dof_slopes(s.g, ch, s.bf, 1e4, 1e6);
  CHECK(slopes2[0] == 0.0);

  CHECK_THROWS_AS((void)estimate_dof_slopes(s.g, s.ch, s.bf, 1e6, 1e4),
                  std::invalid_argument);
}

TEST_CASE("noisy trials report rates and keep running") {
  const auto s = make(2, 2, 23);
  SimulationConfig cfg;
  cfg.noise_variance = 1.0;
  cfg.power = 100.0;
  cfg.trials = 3;
  cfg.symbols = SymbolModel::Qpsk;
  const auto res = simulate(s.g, order_pi_star(s.g), s.ch, s.bf, cfg);
  CHECK(res.avg_rate > 0.0);
  CHECK(res.per_node.size() == static_cast<std::size_t>(s.g.node_count()));
}
