#include "beamformer.hpp"

#include <algorithm>

#include "errors.hpp"

namespace cellia {

double BeamformerSet::average_streams() const {
  if (d.empty()) return 0.0;
  double sum = 0.0;
  for (int s : d) sum += s;
  return sum / static_cast<double>(d.size());
}

std::vector<std::vector<int>> in_edge_lists(int node_count,
                                            const std::vector<DirectedEdge>& edges) {
  std::vector<std::vector<int>> in(static_cast<std::size_t>(node_count));
  for (const auto& e : edges) in[static_cast<std::size_t>(e.rx)].push_back(e.tx);
  for (auto& l : in) std::sort(l.begin(), l.end());
  return in;
}

std::vector<int> select_star_set(const InterferenceGraph& g,
                                 const std::vector<DirectedEdge>& directed_out) {
  std::vector<int> squares, diamonds;
  for (const auto& n : g.nodes()) {
    if (n.coset == Coset::Square) squares.push_back(n.id);
    if (n.coset == Coset::Diamond) diamonds.push_back(n.id);
  }
  // Ties favor diamonds.
  std::vector<int> chosen = squares.size() > diamonds.size() ? squares : diamonds;

  std::vector<char> member(g.nodes().size(), 0);
  for (int id : chosen) member[static_cast<std::size_t>(id)] = 1;
  for (const auto& [u, v] : g.out_edges())
    if (member[static_cast<std::size_t>(u)] && member[static_cast<std::size_t>(v)])
      throw internal_error("select_star_set: set is not independent");
  std::vector<int> hits(g.nodes().size(), 0);
  for (const auto& e : directed_out)
    if (member[static_cast<std::size_t>(e.tx)]) ++hits[static_cast<std::size_t>(e.rx)];
  for (const auto& n : g.nodes())
    if (!member[static_cast<std::size_t>(n.id)] && hits[static_cast<std::size_t>(n.id)] > 1)
      throw internal_error("select_star_set: receiver hears two members");
  return chosen;
}

namespace {

struct ChainDependency {
  int rule = 0;     // 0: none (random draw)
  int source = -1;  // node whose V this one aligns to
  int receiver = -1;
};

// Alignment chain of the raster-oriented network. A square aligns with the
// circle below-left at the diamond receiver to its left; a circle aligns
// with the diamond to its right at the square receiver up-right; a diamond
// aligns with the circle up-right at the square receiver above it. Chains
// terminate at the boundary with random draws.
ChainDependency chain_dependency(const InterferenceGraph& g, const SectorNode& n) {
  const Eisenstein z = n.label;
  Eisenstein source, receiver;
  int rule = 0;
  switch (n.coset) {
    case Coset::Square:
      source = z - kOne - kOmega;
      receiver = z - kOne;
      rule = 1;
      break;
    case Coset::Circle:
      source = z + kOne;
      receiver = z + kOne + kOmega;
      rule = 2;
      break;
    case Coset::Diamond:
      source = z + kOne + kOmega;
      receiver = z + kOmega;
      rule = 3;
      break;
  }
  ChainDependency dep;
  const int src_id = g.node_id(source);
  const int recv_id = g.node_id(receiver);
  if (src_id >= 0 && recv_id >= 0) {
    dep.rule = rule;
    dep.source = src_id;
    dep.receiver = recv_id;
  }
  return dep;
}

enum StreamTag : std::uint64_t {
  kTagTransmit = 1,
  kTagReceive = 2,
  kTagAugment = 3,
};

SplitMix64 node_stream(std::uint64_t seed, int node, StreamTag tag) {
  return substream(seed, (static_cast<std::uint64_t>(node) << 3) | tag);
}

}  // namespace

BeamformerSet design_beamformers(const InterferenceGraph& g,
                                 const std::vector<DirectedEdge>& directed_out,
                                 const ChannelSet& channels,
                                 std::uint64_t seed) {
  const int M = channels.antennas();
  const int n = g.node_count();
  const bool odd = (M % 2) != 0;
  const int d_chain = odd ? (M - 1) / 2 : M / 2;  // transmit columns in the chain
  const int d_recv = M - d_chain;                 // receive columns pre-augmentation

  BeamformerSet bf;
  bf.M = M;
  bf.transmit_rule.assign(static_cast<std::size_t>(n), 0);

  // Transmit chain, memoized depth-first. Chains provably move up-right, so
  // a revisit of an in-progress node indicates a bug.
  std::vector<CMat> vb(static_cast<std::size_t>(n));
  std::vector<signed char> state(static_cast<std::size_t>(n), 0);
  auto resolve = [&](auto&& self, int id) -> void {
    auto& st = state[static_cast<std::size_t>(id)];
    if (st == 2) return;
    if (st == 1) throw internal_error("design_beamformers: dependency cycle");
    st = 1;
    const ChainDependency dep = chain_dependency(g, g.node(id));
    if (d_chain == 0) {
      vb[static_cast<std::size_t>(id)] = CMat(M, 0);
    } else if (dep.rule != 0) {
      self(self, dep.source);
      const CMat& h_own = channels.cross(dep.receiver, id);
      const CMat& h_src = channels.cross(dep.receiver, dep.source);
      if (sigma_min(h_own) <= kRankTolFactor * sigma_max(h_own) * M)
        throw degenerate_input("design_beamformers: singular channel inversion");
      const CMat aligned = h_own.partialPivLu().solve(h_src * vb[static_cast<std::size_t>(dep.source)]);
      vb[static_cast<std::size_t>(id)] = orthonormalize(aligned);
      bf.transmit_rule[static_cast<std::size_t>(id)] = dep.rule;
    } else {
      auto rng = node_stream(seed, id, kTagTransmit);
      vb[static_cast<std::size_t>(id)] = random_orthonormal(M, d_chain, rng);
    }
    st = 2;
  };
  for (int id = 0; id < n; ++id) resolve(resolve, id);

  // Receive bases: null out the (aligned) interference, or random when the
  // receiver hears nobody.
  const auto in_edges = in_edge_lists(n, directed_out);
  std::vector<CMat> ub(static_cast<std::size_t>(n));
  for (int id = 0; id < n; ++id) {
    const auto& in = in_edges[static_cast<std::size_t>(id)];
    if (!in.empty() && d_chain > 0) {
      const CMat aligned = channels.cross(id, in.front()) * vb[static_cast<std::size_t>(in.front())];
      ub[static_cast<std::size_t>(id)] = nullspace_basis(aligned);
    } else {
      auto rng = node_stream(seed, id, kTagReceive);
      ub[static_cast<std::size_t>(id)] = random_orthonormal(M, d_recv, rng);
    }
  }

  bf.d.assign(static_cast<std::size_t>(n), d_chain);
  bf.V.resize(static_cast<std::size_t>(n));
  bf.U.resize(static_cast<std::size_t>(n));

  if (!odd) {
    bf.V = vb;
    bf.U = ub;
    return bf;
  }

  // Odd M: grant one extra stream to an independent set on which no outside
  // receiver hears more than one member, then strip that stream's
  // interference with one extra receive projection.
  bf.V_base = vb;
  bf.U_base = ub;
  bf.augmented_nodes = select_star_set(g, directed_out);
  std::vector<char> augmented(static_cast<std::size_t>(n), 0);
  for (int id : bf.augmented_nodes) augmented[static_cast<std::size_t>(id)] = 1;

  std::vector<CMat> extra_col(static_cast<std::size_t>(n));
  for (int id : bf.augmented_nodes) {
    auto rng = node_stream(seed, id, kTagAugment);
    const CMat& base = vb[static_cast<std::size_t>(id)];
    CMat w;
    for (;;) {
      w = random_gaussian(M, 1, rng);
      const CMat resid = w - base * (base.adjoint() * w);
      if (resid.norm() >= 1e-6 * w.norm()) break;
    }
    extra_col[static_cast<std::size_t>(id)] = w;
  }

  for (int id = 0; id < n; ++id) {
    auto& V = bf.V[static_cast<std::size_t>(id)];
    auto& U = bf.U[static_cast<std::size_t>(id)];
    const auto& base_v = vb[static_cast<std::size_t>(id)];
    const auto& base_u = ub[static_cast<std::size_t>(id)];
    if (augmented[static_cast<std::size_t>(id)]) {
      CMat widened(M, d_chain + 1);
      widened << base_v, extra_col[static_cast<std::size_t>(id)];
      V = orthonormalize(widened);
      U = base_u;
      bf.d[static_cast<std::size_t>(id)] = d_chain + 1;
      continue;
    }
    V = base_v;
    int augmented_tx = -1;
    for (int tx : in_edges[static_cast<std::size_t>(id)])
      if (augmented[static_cast<std::size_t>(tx)]) {
        augmented_tx = tx;
        break;
      }
    if (augmented_tx >= 0 && d_chain > 0) {
      const CMat w = base_u.adjoint() * channels.cross(id, augmented_tx) *
                     extra_col[static_cast<std::size_t>(augmented_tx)];
      U = base_u * nullspace_basis(w);
    } else if (augmented_tx >= 0) {
      U = CMat(M, 0);  // M=1 receiver hearing an augmented stream carries no data
    } else {
      U = base_u.leftCols(d_chain);
    }
  }
  return bf;
}

AlignmentReport verify_alignment(const InterferenceGraph& g,
                                 const std::vector<DirectedEdge>& directed,
                                 const ChannelSet& channels,
                                 const BeamformerSet& bf,
                                 double zf_tol, double desired_tol) {
  AlignmentReport report;
  report.edges.reserve(directed.size());
  for (const auto& e : directed) {
    const CMat& h = channels.cross(e.rx, e.tx);
    const double denom = h.norm();
    const CMat leak = bf.U[static_cast<std::size_t>(e.rx)].adjoint() * h *
                      bf.V[static_cast<std::size_t>(e.tx)];
    const double resid = denom > 0 ? leak.norm() / denom : leak.norm();
    if (resid > zf_tol)
      report.zero_forcing_violations.push_back(static_cast<int>(report.edges.size()));
    report.edges.push_back({e.tx, e.rx, resid});
    report.max_zero_forcing_residual = std::max(report.max_zero_forcing_residual, resid);
  }
  for (const auto& n : g.nodes()) {
    if (bf.d[static_cast<std::size_t>(n.id)] == 0) continue;
    const CMat eff = bf.U[static_cast<std::size_t>(n.id)].adjoint() *
                     channels.direct(n.id) * bf.V[static_cast<std::size_t>(n.id)];
    const double sigma = sigma_min(eff);
    report.min_desired_sigma = std::min(report.min_desired_sigma, sigma);
    if (!(sigma > desired_tol)) report.desired_violations.push_back(n.id);
  }
  report.ok = report.zero_forcing_violations.empty() && report.desired_violations.empty();
  return report;
}

}  // namespace cellia
