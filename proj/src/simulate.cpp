#include "simulate.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "errors.hpp"

namespace cellia {

int CellSystem::block_of(int node) const {
  for (std::size_t i = 0; i < block_node.size(); ++i)
    if (block_node[i] == node) return static_cast<int>(i);
  return -1;
}

JointDecodeResult joint_cell_decode(const CellSystem& sys) {
  JointDecodeResult r;
  const int cols = static_cast<int>(sys.matrix.cols());
  r.system_sigma_min = sigma_min(sys.matrix);
  r.ok = cols == 0 || numerical_rank(sys.matrix) == cols;
  const CMat sol = solve_min_norm(sys.matrix, sys.observation);
  for (std::size_t i = 0; i < sys.block_node.size(); ++i)
    r.symbols.push_back(sol.block(sys.block_offset[i], 0, sys.block_size[i], 1));
  return r;
}

std::vector<CVec> ql_successive_decode(const CellSystem& sys) {
  if (sys.matrix.rows() != sys.matrix.cols())
    throw std::invalid_argument("ql_successive_decode: square system required");
  auto [q, l] = ql_decompose(sys.matrix);
  const CVec rotated = q.adjoint() * sys.observation;
  const CVec sol = l.triangularView<Eigen::Lower>().solve(rotated);
  std::vector<CVec> out;
  for (std::size_t i = 0; i < sys.block_node.size(); ++i)
    out.push_back(sol.segment(sys.block_offset[i], sys.block_size[i]));
  return out;
}

double rate_bits_at(const CMat& effective, double power, int streams) {
  if (streams == 0 || effective.size() == 0) return 0.0;
  const CMat gram = (power / streams) * (effective * effective.adjoint());
  Eigen::SelfAdjointEigenSolver<CMat> es(gram);
  double bits = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    bits += std::log2(1.0 + std::max(0.0, es.eigenvalues()(i)));
  return bits;
}

std::vector<double> estimate_dof_slopes(const InterferenceGraph& g,
                                        const ChannelSet& channels,
                                        const BeamformerSet& bf, double p1, double p2) {
  if (!(p2 > p1) || !(p1 > 0))
    throw std::invalid_argument("estimate_dof_slopes: need p2 > p1 > 0");
  std::vector<double> slopes;
  slopes.reserve(g.nodes().size());
  const double denom = std::log2(p2) - std::log2(p1);
  for (const auto& n : g.nodes()) {
    const int d = bf.d[static_cast<std::size_t>(n.id)];
    if (d == 0) {
      slopes.push_back(0.0);
      continue;
    }
    const CMat eff = bf.U[static_cast<std::size_t>(n.id)].adjoint() *
                     channels.direct(n.id) * bf.V[static_cast<std::size_t>(n.id)];
    slopes.push_back((rate_bits_at(eff, p2, d) - rate_bits_at(eff, p1, d)) / denom);
  }
  return slopes;
}

namespace {

// One cell as the decoder sees it: members keyed by role, possibly truncated
// at the boundary. Keyed over all circle labels (in-region or not) so that
// boundary secondaries whose primary fell outside the region still join up.
struct DecodeCell {
  int a = -1, b = -1, c = -1;  // circle, diamond, square members
  int d = -1;                  // external diamond heard by a and c
  std::vector<int> members;    // present a/b/c
};

class Walker {
 public:
  Walker(const InterferenceGraph& g, const DecodingOrder& order, const ChannelSet& ch,
         const BeamformerSet& bf, const SimulationConfig& cfg, AccessLog* log)
      : g_(g), order_(order), ch_(ch), bf_(bf), cfg_(cfg), log_(log) {
    const int n = g.node_count();
    scale_.resize(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v) {
      const int d = bf.d[static_cast<std::size_t>(v)];
      scale_[static_cast<std::size_t>(v)] = d > 0 ? std::sqrt(cfg.power / d) : 0.0;
    }
    build_cells();
  }

  // Worst-case symbol error and decode status accumulated per node.
  std::vector<char> decode_ok;
  std::vector<double> worst_error;
  std::vector<double> sigma_seen;

  void run_trial(std::uint64_t trial) {
    const int n = g_.node_count();
    sent_.assign(static_cast<std::size_t>(n), CVec());
    estimate_.assign(static_cast<std::size_t>(n), CVec());
    have_estimate_.assign(static_cast<std::size_t>(n), 0);
    if (decode_ok.empty()) decode_ok.assign(static_cast<std::size_t>(n), 1);
    if (worst_error.empty()) worst_error.assign(static_cast<std::size_t>(n), 0.0);
    if (sigma_seen.empty())
      sigma_seen.assign(static_cast<std::size_t>(n), std::numeric_limits<double>::infinity());

    draw_symbols(trial);
    form_received(trial);

    for (const auto& group : order_.joint_groups) {
      if (group.empty()) continue;
      switch (cfg_.mode) {
        case SimMode::NoIntraCell:
          for (int u : group) single_decode(u);
          break;
        case SimMode::IntraCellJoint:
          for (int u : group) {
            if (have_estimate_[static_cast<std::size_t>(u)]) continue;
            const DecodeCell& cell = cell_of(u);
            if (cell.members.size() == 1)
              single_decode(u);
            else
              joint_decode(cell);
          }
          break;
        case SimMode::RobustPiS: {
          const bool primary = group.size() == 1 && g_.node(group.front()).coset == Coset::Circle;
          if (primary)
            robust_primary(cell_of(group.front()));
          else
            robust_pair(group);
          break;
        }
      }
    }
  }

 private:
  const InterferenceGraph& g_;
  const DecodingOrder& order_;
  const ChannelSet& ch_;
  const BeamformerSet& bf_;
  const SimulationConfig& cfg_;
  AccessLog* log_;

  std::vector<double> scale_;
  std::vector<CVec> sent_;
  std::vector<CVec> received_;
  std::vector<CVec> estimate_;
  std::vector<char> have_estimate_;

  std::vector<DecodeCell> cells_;
  std::vector<int> cell_index_;  // per node

  bool use_intra() const { return cfg_.mode != SimMode::NoIntraCell; }

  void build_cells() {
    std::unordered_map<Eisenstein, int, EisensteinHash> index;
    cell_index_.assign(g_.nodes().size(), -1);
    for (const auto& n : g_.nodes()) {
      const Eisenstein key = cell_key_of(n.label);
      auto [it, inserted] = index.emplace(key, static_cast<int>(cells_.size()));
      if (inserted) {
        DecodeCell c;
        c.a = g_.node_id(key);
        c.b = g_.node_id(key + kOne);
        c.c = g_.node_id(key - kOmega);
        c.d = g_.node_id(key - kOmega - kOne);
        for (int m : {c.a, c.b, c.c})
          if (m >= 0) c.members.push_back(m);
        cells_.push_back(c);
      }
      cell_index_[static_cast<std::size_t>(n.id)] = it->second;
    }
  }

  const DecodeCell& cell_of(int node) const {
    return cells_[static_cast<std::size_t>(cell_index_[static_cast<std::size_t>(node)])];
  }

  void draw_symbols(std::uint64_t trial) {
    SplitMix64 rng = substream(cfg_.seed, 0x531B0153ULL ^ (trial << 20));
    for (const auto& n : g_.nodes()) {
      const int d = bf_.d[static_cast<std::size_t>(n.id)];
      CVec s(d);
      for (int i = 0; i < d; ++i) {
        if (cfg_.symbols == SymbolModel::UnitGaussian) {
          s(i) = rng.gaussian();
        } else {
          const double re = (rng.next() & 1) ? 1.0 : -1.0;
          const double im = (rng.next() & 1) ? 1.0 : -1.0;
          s(i) = std::complex<double>(re, im) / std::sqrt(2.0);
        }
      }
      sent_[static_cast<std::size_t>(n.id)] = std::move(s);
    }
  }

  // Transmitter contribution of v at receiver u (masked channels as given).
  CVec contribution(int u, int v, const CVec& symbols) const {
    const CMat& h = u == v ? ch_.direct(u) : ch_.cross(u, v);
    return h * (bf_.V[static_cast<std::size_t>(v)] * symbols) * scale_[static_cast<std::size_t>(v)];
  }

  void form_received(std::uint64_t trial) {
    const int n = g_.node_count();
    received_.assign(static_cast<std::size_t>(n), CVec());
    SplitMix64 noise_rng = substream(cfg_.seed, 0x9015E000ULL ^ (trial << 20));
    const double sigma = std::sqrt(cfg_.noise_variance);
    for (int u = 0; u < n; ++u) {
      CVec y = CVec::Zero(bf_.M);
      if (bf_.d[static_cast<std::size_t>(u)] > 0)
        y += contribution(u, u, sent_[static_cast<std::size_t>(u)]);
      for (int v : g_.out_neighbors(u))
        if (bf_.d[static_cast<std::size_t>(v)] > 0)
          y += contribution(u, v, sent_[static_cast<std::size_t>(v)]);
      if (use_intra())
        for (int v : g_.intra_neighbors(u))
          if (bf_.d[static_cast<std::size_t>(v)] > 0)
            y += contribution(u, v, sent_[static_cast<std::size_t>(v)]);
      for (int i = 0; i < bf_.M; ++i) y(i) += sigma * noise_rng.gaussian();
      received_[static_cast<std::size_t>(u)] = std::move(y);
    }
  }

  // Observation at u with every earlier-decoded neighbor's reconstructed
  // signal subtracted. Reads only messages of adjacent nodes.
  CVec cancelled_observation(int u) {
    CVec y = received_[static_cast<std::size_t>(u)];
    const int ru = order_.rank[static_cast<std::size_t>(u)];
    auto subtract = [&](int v) {
      if (order_.rank[static_cast<std::size_t>(v)] >= ru) return;
      if (!have_estimate_[static_cast<std::size_t>(v)]) return;  // failed earlier
      if (bf_.d[static_cast<std::size_t>(v)] == 0) return;
      if (log_) log_->reads.emplace_back(u, v);
      y -= contribution(u, v, estimate_[static_cast<std::size_t>(v)]);
    };
    for (int v : g_.out_neighbors(u)) subtract(v);
    if (use_intra())
      for (int v : g_.intra_neighbors(u)) subtract(v);
    return y;
  }

  void record(int node, const CVec& est, bool ok, double sigma) {
    estimate_[static_cast<std::size_t>(node)] = est;
    have_estimate_[static_cast<std::size_t>(node)] = 1;
    decode_ok[static_cast<std::size_t>(node)] = ok ? decode_ok[static_cast<std::size_t>(node)] : 0;
    sigma_seen[static_cast<std::size_t>(node)] =
        std::min(sigma_seen[static_cast<std::size_t>(node)], sigma);
    const CVec& truth = sent_[static_cast<std::size_t>(node)];
    double err = 0.0;
    for (Eigen::Index i = 0; i < truth.size(); ++i)
      err = std::max(err, std::abs(est(i) - truth(i)));
    worst_error[static_cast<std::size_t>(node)] =
        std::max(worst_error[static_cast<std::size_t>(node)], err);
    if (err > cfg_.tolerance && cfg_.noise_variance == 0.0)
      decode_ok[static_cast<std::size_t>(node)] = 0;
  }

  void single_decode(int u) {
    const int d = bf_.d[static_cast<std::size_t>(u)];
    if (d == 0) {
      have_estimate_[static_cast<std::size_t>(u)] = 1;
      estimate_[static_cast<std::size_t>(u)] = CVec();
      return;
    }
    const CVec y = cancelled_observation(u);
    const CMat& U = bf_.U[static_cast<std::size_t>(u)];
    const CMat eff = U.adjoint() * ch_.direct(u) * bf_.V[static_cast<std::size_t>(u)];
    const bool ok = numerical_rank(eff) == d;
    const CVec est = solve_min_norm(eff * scale_[static_cast<std::size_t>(u)], U.adjoint() * y);
    record(u, est, ok, sigma_min(eff));
  }

  // Stacked system used by both the intra-cell joint decode and the robust
  // primary decode: raw primary rows, projected secondary rows, one unknown
  // block per undecoded member of {a, b, c, d}.
  CellSystem build_cell_system(const DecodeCell& cell, bool include_a_row) {
    CellSystem sys;
    std::vector<int> receivers;
    if (cell.a >= 0 && include_a_row) receivers.push_back(cell.a);
    for (int s : {cell.b, cell.c})
      if (s >= 0) receivers.push_back(s);

    auto undecoded = [&](int v) {
      return v >= 0 && !have_estimate_[static_cast<std::size_t>(v)] &&
             bf_.d[static_cast<std::size_t>(v)] > 0;
    };
    int cols = 0;
    for (int v : {cell.a, cell.b, cell.c, cell.d}) {
      if (!undecoded(v)) continue;
      sys.block_node.push_back(v);
      sys.block_offset.push_back(cols);
      sys.block_size.push_back(bf_.d[static_cast<std::size_t>(v)]);
      cols += bf_.d[static_cast<std::size_t>(v)];
    }

    int rows = 0;
    std::vector<CMat> projectors;
    for (int rcv : receivers) {
      const bool raw = rcv == cell.a;
      projectors.push_back(raw ? CMat(CMat::Identity(bf_.M, bf_.M))
                               : CMat(bf_.U[static_cast<std::size_t>(rcv)].adjoint()));
      rows += static_cast<int>(projectors.back().rows());
    }

    sys.matrix = CMat::Zero(rows, cols);
    sys.observation = CVec::Zero(rows);
    int row0 = 0;
    for (std::size_t ri = 0; ri < receivers.size(); ++ri) {
      const int rcv = receivers[ri];
      const CMat& proj = projectors[ri];
      const int h = static_cast<int>(proj.rows());
      sys.observation.segment(row0, h) = proj * cancelled_observation(rcv);
      for (std::size_t bi = 0; bi < sys.block_node.size(); ++bi) {
        const int tx = sys.block_node[bi];
        CMat gain;
        if (tx == rcv)
          gain = ch_.direct(rcv);
        else if (g_.adjacent(rcv, tx))
          gain = ch_.cross(rcv, tx);
        else
          continue;  // e.g. b never hears d
        sys.matrix.block(row0, sys.block_offset[bi], h, sys.block_size[bi]) =
            proj * gain * bf_.V[static_cast<std::size_t>(tx)] *
            scale_[static_cast<std::size_t>(tx)];
      }
      row0 += h;
    }
    return sys;
  }

  void joint_decode(const DecodeCell& cell) {
    CellSystem sys = build_cell_system(cell, /*include_a_row=*/true);
    const JointDecodeResult res = joint_cell_decode(sys);
    // The system matrix already carries the power scaling, so the solved
    // blocks are the symbols themselves.
    for (std::size_t bi = 0; bi < sys.block_node.size(); ++bi) {
      const int node = sys.block_node[bi];
      if (node == cell.d) continue;  // d is decoded by its own cell later
      record(node, res.symbols[bi], res.ok, res.system_sigma_min);
    }
    // Zero-stream members decode vacuously.
    for (int m : cell.members)
      if (bf_.d[static_cast<std::size_t>(m)] == 0) {
        have_estimate_[static_cast<std::size_t>(m)] = 1;
        estimate_[static_cast<std::size_t>(m)] = CVec();
      }
  }

  void robust_primary(const DecodeCell& cell) {
    const int a = cell.a;
    const int da = bf_.d[static_cast<std::size_t>(a)];
    if (da == 0) {
      have_estimate_[static_cast<std::size_t>(a)] = 1;
      estimate_[static_cast<std::size_t>(a)] = CVec();
      return;
    }
    CellSystem sys = build_cell_system(cell, /*include_a_row=*/true);
    const int blk = sys.block_of(a);
    const bool reachable = selector_rows_in_rowspan(sys.matrix, sys.block_offset[blk], da);
    const CMat sol = solve_min_norm(sys.matrix, sys.observation);
    const CVec est = sol.block(sys.block_offset[blk], 0, da, 1);
    record(a, est, reachable, sigma_min(sys.matrix));
  }

  void robust_pair(const std::vector<int>& group) {
    // Secondaries of one cell; primary and the external d already decoded.
    for (int u : group) {
      if (bf_.d[static_cast<std::size_t>(u)] > 0) continue;
      have_estimate_[static_cast<std::size_t>(u)] = 1;
      estimate_[static_cast<std::size_t>(u)] = CVec();
    }
    std::vector<int> active;
    for (int u : group)
      if (bf_.d[static_cast<std::size_t>(u)] > 0) active.push_back(u);
    if (active.empty()) return;

    int rows = 0, cols = 0;
    std::vector<int> offsets;
    for (int u : active) {
      offsets.push_back(cols);
      rows += bf_.d[static_cast<std::size_t>(u)];
      cols += bf_.d[static_cast<std::size_t>(u)];
    }
    CMat m = CMat::Zero(rows, cols);
    CVec obs = CVec::Zero(rows);
    int row0 = 0;
    for (std::size_t i = 0; i < active.size(); ++i) {
      const int rcv = active[i];
      const CMat proj = bf_.U[static_cast<std::size_t>(rcv)].adjoint();
      const int h = static_cast<int>(proj.rows());
      obs.segment(row0, h) = proj * cancelled_observation(rcv);
      for (std::size_t j = 0; j < active.size(); ++j) {
        const int tx = active[j];
        if (tx != rcv && !g_.adjacent(rcv, tx)) continue;
        const CMat& gain = tx == rcv ? ch_.direct(rcv) : ch_.cross(rcv, tx);
        m.block(row0, offsets[j], h, bf_.d[static_cast<std::size_t>(tx)]) =
            proj * gain * bf_.V[static_cast<std::size_t>(tx)] * scale_[static_cast<std::size_t>(tx)];
      }
      row0 += h;
    }
    const bool ok = numerical_rank(m) == cols;
    const CMat sol = solve_min_norm(m, obs);
    const double sg = sigma_min(m);
    for (std::size_t i = 0; i < active.size(); ++i) {
      const int node = active[i];
      const CVec est = sol.block(offsets[i], 0, bf_.d[static_cast<std::size_t>(node)], 1);
      record(node, est, ok, sg);
    }
  }
};

}  // namespace

SimulationResult simulate(const InterferenceGraph& g, const DecodingOrder& order,
                          const ChannelSet& channels, const BeamformerSet& bf,
                          const SimulationConfig& cfg, const CompoundState* state,
                          AccessLog* log) {
  if (!(cfg.power > 0)) throw std::invalid_argument("simulate: power must be positive");
  if (cfg.noise_variance < 0) throw std::invalid_argument("simulate: negative noise variance");
  if (cfg.trials < 1) throw std::invalid_argument("simulate: trials must be >= 1");
  const bool want_pi_s = cfg.mode == SimMode::RobustPiS;
  if (want_pi_s != (order.kind == OrderKind::PiS))
    throw std::invalid_argument("simulate: order kind does not match mode");
  if (cfg.mode == SimMode::RobustPiS && !g.has_intra())
    throw std::invalid_argument("simulate: robust mode needs the intra-cell graph");

  ChannelSet masked;
  const ChannelSet* ch = &channels;
  if (state != nullptr) {
    masked = apply_compound(channels, *state);
    ch = &masked;
  }

  Walker walker(g, order, *ch, bf, cfg, log);
  for (int t = 0; t < cfg.trials; ++t) walker.run_trial(static_cast<std::uint64_t>(t));

  SimulationResult result;
  const int n = g.node_count();
  result.per_node.resize(static_cast<std::size_t>(n));
  const auto slopes = estimate_dof_slopes(g, *ch, bf, cfg.power, 100.0 * cfg.power);
  double rate_sum = 0.0, slope_sum = 0.0;
  for (int v = 0; v < n; ++v) {
    auto& nr = result.per_node[static_cast<std::size_t>(v)];
    nr.decoded = walker.decode_ok[static_cast<std::size_t>(v)] != 0;
    nr.symbol_error = walker.worst_error[static_cast<std::size_t>(v)];
    nr.effective_sigma_min = walker.sigma_seen[static_cast<std::size_t>(v)];
    const int d = bf.d[static_cast<std::size_t>(v)];
    const CMat eff = d > 0 ? CMat(bf.U[static_cast<std::size_t>(v)].adjoint() *
                                  ch->direct(v) * bf.V[static_cast<std::size_t>(v)])
                           : CMat();
    nr.rate_bits = rate_bits_at(eff, cfg.power, d);
    rate_sum += nr.rate_bits;
    slope_sum += slopes[static_cast<std::size_t>(v)];
    if (!nr.decoded) ++result.failed_nodes;
  }
  result.all_decoded = result.failed_nodes == 0;
  result.avg_rate = n > 0 ? rate_sum / n : 0.0;
  result.avg_dof_estimate = n > 0 ? slope_sum / n : 0.0;

  const auto directed = orient_edges(g, order, EdgeSelector::Out);
  result.max_alignment_residual =
      verify_alignment(g, directed, *ch, bf).max_zero_forcing_residual;
  return result;
}

}  // namespace cellia
