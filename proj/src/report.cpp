#include "report.hpp"

#include <cmath>
#include <cstdio>
#include <ctime>
#include <stdexcept>

#include "bounds.hpp"
#include "json.hpp"
#include "robustness.hpp"

namespace cellia {

const char* library_name() { return "cellia"; }
const char* library_version() { return "0.1.0"; }

namespace {

using nlohmann::json;

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct Verdicts {
  json list = json::array();
  bool pass = true;
  void add(const std::string& name, bool ok, const std::string& detail = "") {
    list.push_back({{"name", name}, {"pass", ok}, {"detail", detail}});
    pass = pass && ok;
  }
};

json config_echo(const RunConfig& c) {
  return json{{"command", c.command},
              {"r", c.r},
              {"M", c.M},
              {"seed", c.seed},
              {"seeds", c.seeds},
              {"order", c.order},
              {"mode", c.mode},
              {"snr_db", c.snr_db},
              {"trials", c.trials},
              {"include_intra", c.include_intra},
              {"exact_q1", c.exact_q1},
              {"exhaustive_neighborhood", c.exhaustive_neighborhood},
              {"random_states", c.random_states},
              {"compound_m_factor", c.compound_m_factor}};
}

SimMode parse_mode(const std::string& mode) {
  if (mode == "no-intra") return SimMode::NoIntraCell;
  if (mode == "intra-joint") return SimMode::IntraCellJoint;
  if (mode == "robust") return SimMode::RobustPiS;
  throw std::invalid_argument("unknown mode: " + mode);
}

std::string node_csv_header() {
  return "id,a,b,coset,streams,decoded,symbol_error,sigma_min,rate_bits\n";
}

std::string graph_csv(const InterferenceGraph& g) {
  std::string csv = "id,a,b,coset,n_v,interior\n";
  const auto& cls = g.classification();
  for (const auto& n : g.nodes()) {
    const int nv = cls.n_v[static_cast<std::size_t>(n.id)];
    csv += std::to_string(n.id) + "," + std::to_string(n.label.a) + "," +
           std::to_string(n.label.b) + "," + coset_name(n.coset) + "," +
           std::to_string(nv) + "," + (nv == 2 ? "1" : "0") + "\n";
  }
  return csv;
}

// Picks the deterministic sweep target: lowest-id full cell with external d.
const Cell& sweep_cell(const InterferenceGraph& g) {
  for (const auto& c : g.cells())
    if (c.full() && c.external_d >= 0) return c;
  throw std::invalid_argument("no full cell with an external neighbor at this radius");
}

json cmd_graph(const RunConfig& cfg, Verdicts& v, RunOutput& out) {
  const InterferenceGraph g = build_graph(cfg.r, cfg.include_intra);
  const CardinalityFormulas f = cardinality_formulas(cfg.r);
  const auto& cls = g.classification();

  json results;
  results["counts"] = {{"nodes", g.node_count()},
                       {"out_edges", g.out_edges().size()},
                       {"intra_edges", g.intra_edges().size()},
                       {"triangles", g.triangles().size()},
                       {"interior", cls.interior.size()},
                       {"exterior", cls.exterior.size()}};
  results["closed_forms"] = {{"nodes", f.n_nodes},
                             {"triangles", f.n_triangles},
                             {"exterior_bound", f.vex_bound}};
  int full_cells = 0;
  for (const auto& c : g.cells())
    if (c.full()) ++full_cells;
  results["cells"] = {{"count", g.cells().size()}, {"full", full_cells}};
  results["graph"] = json::parse(g.to_json());

  v.add("node-count-closed-form", g.node_count() == f.n_nodes);
  v.add("triangle-count-closed-form",
        static_cast<long long>(g.triangles().size()) == f.n_triangles);
  v.add("exterior-bound",
        static_cast<long long>(cls.exterior.size()) <= f.vex_bound);
  v.add("triangle-fraction",
        3 * static_cast<long long>(g.triangles().size()) <= 2 * g.node_count());
  bool cosets_differ = true;
  for (const auto& [a, b] : g.out_edges())
    cosets_differ = cosets_differ && g.node(a).coset != g.node(b).coset;
  v.add("out-edge-cosets-differ", cosets_differ);
  const std::vector<double> ones(g.nodes().size(), 1.0);
  const auto [lhs, rhs] = triangle_sum_check(g, ones);
  v.add("triangle-sum-identity", std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(lhs)));

  if (!cfg.order.empty()) {
    const DecodingOrder order =
        cfg.order == "pi-s" ? order_pi_s(g) : order_pi_star(g);
    out.dot = g.to_dot(&order.rank);
  } else {
    out.dot = g.to_dot();
  }
  out.csv = graph_csv(g);
  return results;
}

json cmd_design(const RunConfig& cfg, Verdicts& v) {
  const InterferenceGraph g = build_graph(cfg.r, true);
  const auto directed = orient_edges(g, order_pi_star(g), EdgeSelector::Out);
  const double bound = achievable_upper_bound(g, cfg.M);

  double max_res = 0.0, min_sig = std::numeric_limits<double>::infinity();
  double avg_streams = 0.0;
  std::size_t star_size = 0;
  json per_seed = json::array();
  for (int k = 0; k < cfg.seeds; ++k) {
    const std::uint64_t s = cfg.seed + static_cast<std::uint64_t>(k);
    const ChannelSet ch = sample_channels(g, cfg.M, s);
    const BeamformerSet bf = design_beamformers(g, directed, ch, s);
    const AlignmentReport rep = verify_alignment(g, directed, ch, bf);
    max_res = std::max(max_res, rep.max_zero_forcing_residual);
    min_sig = std::min(min_sig, rep.min_desired_sigma);
    avg_streams = bf.average_streams();
    star_size = bf.augmented_nodes.size();
    per_seed.push_back({{"seed", s},
                        {"max_zero_forcing_residual", rep.max_zero_forcing_residual},
                        {"min_desired_sigma", rep.min_desired_sigma}});
  }

  json results;
  results["max_zero_forcing_residual"] = max_res;
  results["min_desired_sigma"] = min_sig;
  results["average_streams"] = avg_streams;
  results["star_set_size"] = star_size;
  results["upper_bound"] = bound;
  results["per_seed"] = per_seed;

  v.add("alignment-zero-forcing", max_res <= 1e-8, "max residual " + fmt_double(max_res));
  v.add("desired-links-full-rank", min_sig > 1e-6, "min sigma " + fmt_double(min_sig));
  const double n = g.node_count();
  if (cfg.M % 2 == 0) {
    v.add("average-streams-formula", avg_streams == cfg.M / 2.0);
  } else {
    const double expected = (cfg.M - 1) / 2.0 + static_cast<double>(star_size) / n;
    v.add("average-streams-formula",
          std::abs(avg_streams - expected) <= 1e-12 &&
              avg_streams >= cfg.M / 2.0 - 1.0 / 6.0 - 1e-12);
  }
  v.add("theorem-2-upper-bound", avg_streams <= bound + 1e-12,
        "achieved " + fmt_double(avg_streams) + " bound " + fmt_double(bound));
  return results;
}

json cmd_simulate(const RunConfig& cfg, Verdicts& v, RunOutput& out) {
  if (cfg.snr_db.empty()) throw std::invalid_argument("simulate: snr list is empty");
  const InterferenceGraph g = build_graph(cfg.r, true);
  const SimMode mode = parse_mode(cfg.mode);
  const DecodingOrder order =
      mode == SimMode::RobustPiS ? order_pi_s(g) : order_pi_star(g);
  const auto directed = orient_edges(g, order_pi_star(g), EdgeSelector::Out);

  bool all_decoded = true;
  double max_err = 0.0, max_res = 0.0;
  int failed = 0;
  SimulationResult first_result;
  ChannelSet first_ch;
  BeamformerSet first_bf;
  for (int k = 0; k < cfg.seeds; ++k) {
    const std::uint64_t s = cfg.seed + static_cast<std::uint64_t>(k);
    const ChannelSet ch = sample_channels(g, cfg.M, s);
    const BeamformerSet bf = design_beamformers(g, directed, ch, s);
    SimulationConfig sim;
    sim.mode = mode;
    sim.trials = cfg.trials;
    sim.seed = s;
    CompoundState ones = CompoundState::all_ones(ch);
    const SimulationResult res =
        simulate(g, order, ch, bf, sim, mode == SimMode::RobustPiS ? &ones : nullptr);
    all_decoded = all_decoded && res.all_decoded;
    failed += res.failed_nodes;
    for (const auto& nr : res.per_node) max_err = std::max(max_err, nr.symbol_error);
    max_res = std::max(max_res, res.max_alignment_residual);
    if (k == 0) {
      first_result = res;
      first_ch = ch;
      first_bf = bf;
    }
  }

  json rates = json::array();
  for (double snr : cfg.snr_db) {
    const double power = std::pow(10.0, snr / 10.0);
    double sum = 0.0;
    for (const auto& n : g.nodes()) {
      const int d = first_bf.d[static_cast<std::size_t>(n.id)];
      const CMat eff = d > 0 ? CMat(first_bf.U[static_cast<std::size_t>(n.id)].adjoint() *
                                    first_ch.direct(n.id) *
                                    first_bf.V[static_cast<std::size_t>(n.id)])
                             : CMat();
      sum += rate_bits_at(eff, power, d);
    }
    rates.push_back({{"snr_db", snr}, {"avg_rate_bits", sum / g.node_count()}});
  }

  json results;
  results["noiseless"] = {{"all_decoded", all_decoded},
                          {"failed_nodes", failed},
                          {"max_symbol_error", max_err},
                          {"max_alignment_residual", max_res}};
  results["rates"] = rates;
  if (cfg.snr_db.size() >= 2) {
    const double p1 = std::pow(10.0, cfg.snr_db.front() / 10.0);
    const double p2 = std::pow(10.0, cfg.snr_db.back() / 10.0);
    const auto slopes = estimate_dof_slopes(g, first_ch, first_bf, p1, p2);
    double sum = 0.0, lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (double s : slopes) {
      sum += s;
      lo = std::min(lo, s);
      hi = std::max(hi, s);
    }
    results["dof_slope"] = {{"avg", sum / slopes.size()}, {"min", lo}, {"max", hi}};
  }

  v.add("noiseless-decode", all_decoded && max_err <= 1e-6,
        "max symbol error " + fmt_double(max_err));
  v.add("alignment-zero-forcing", max_res <= 1e-8);

  const double last_power = std::pow(10.0, cfg.snr_db.back() / 10.0);
  std::string csv = node_csv_header();
  for (const auto& n : g.nodes()) {
    const auto& nr = first_result.per_node[static_cast<std::size_t>(n.id)];
    const int d = first_bf.d[static_cast<std::size_t>(n.id)];
    const CMat eff = d > 0 ? CMat(first_bf.U[static_cast<std::size_t>(n.id)].adjoint() *
                                  first_ch.direct(n.id) *
                                  first_bf.V[static_cast<std::size_t>(n.id)])
                           : CMat();
    csv += std::to_string(n.id) + "," + std::to_string(n.label.a) + "," +
           std::to_string(n.label.b) + "," + coset_name(n.coset) + "," +
           std::to_string(d) + "," + (nr.decoded ? "1" : "0") + "," +
           fmt_double(nr.symbol_error) + "," + fmt_double(nr.effective_sigma_min) + "," +
           fmt_double(rate_bits_at(eff, last_power, d)) + "\n";
  }
  out.csv = csv;
  return results;
}

json cmd_bounds(const RunConfig& cfg, Verdicts& v) {
  const InterferenceGraph g = build_graph(cfg.r, true);
  const auto directed = orient_edges(g, order_pi_star(g), EdgeSelector::Out);
  const ChannelSet ch = sample_channels(g, cfg.M, cfg.seed);
  const BeamformerSet bf = design_beamformers(g, directed, ch, cfg.seed);

  const long long nV = g.node_count();
  const long long nT = static_cast<long long>(g.triangles().size());
  const long long nVex = static_cast<long long>(g.classification().exterior.size());
  const double upper = achievable_upper_bound(g, cfg.M);
  const double achieved = bf.average_streams();
  const CompoundBound comp = compound_upper_bound(g, cfg.M);

  json results;
  results["M"] = cfg.M;
  results["r"] = cfg.r;
  results["s_star"] = s_star(cfg.M);
  results["nV"] = nV;
  results["nT"] = nT;
  results["nVex"] = nVex;
  results["upper_avg"] = upper;
  results["achievable_avg"] = achieved;
  results["compound_upper"] = cfg.compound_m_factor ? comp.value_with_m : comp.value;
  results["compound"] = {{"printed_form", comp.value},
                         {"with_m_factor", comp.value_with_m},
                         {"hat_triangles", comp.hat_triangles},
                         {"hat_exterior", comp.hat_exterior}};

  if (cfg.M <= 12) {
    const int brute = brute_force_s_star(cfg.M);
    results["brute_s_star"] = brute;
    v.add("s-star-closed-form", brute == s_star(cfg.M));
  }
  v.add("achievable-below-upper", achieved <= upper + 1e-12);

  if (cfg.exact_q1) {
    const Q1Result q1 = brute_force_q1(g, cfg.M);
    json jq;
    jq["computed"] = q1.computed;
    jq["explored"] = q1.explored;
    if (q1.computed) {
      jq["opt_sum"] = q1.opt_sum;
      jq["exact_avg"] = static_cast<double>(q1.opt_sum) / static_cast<double>(nV);
      v.add("q1-below-upper",
            static_cast<double>(q1.opt_sum) <= upper * static_cast<double>(nV) + 1e-9);
      v.add("q1-at-least-achieved",
            static_cast<double>(q1.opt_sum) + 1e-9 >= achieved * static_cast<double>(nV));
    } else {
      jq["opt_sum"] = nullptr;
      jq["exact_avg"] = nullptr;
    }
    results["q1_exact"] = jq;
  } else {
    results["q1_exact"] = nullptr;
  }

  // Compound triangle structure: disjoint triangles whose members sit in
  // three distinct cells.
  bool disjoint = true, distinct_cells = true;
  {
    std::vector<int> seen(g.nodes().size(), 0);
    for (const auto& t : comp.triangles) {
      for (int m : t.members) {
        if (seen[static_cast<std::size_t>(m)]) disjoint = false;
        seen[static_cast<std::size_t>(m)] = 1;
      }
      const Eisenstein k0 = cell_key_of(g.node(t.members[0]).label);
      const Eisenstein k1 = cell_key_of(g.node(t.members[1]).label);
      const Eisenstein k2 = cell_key_of(g.node(t.members[2]).label);
      if (k0 == k1 || k1 == k2 || k0 == k2) distinct_cells = false;
    }
  }
  v.add("compound-triangles-disjoint", disjoint);
  v.add("compound-triangles-distinct-cells", distinct_cells);
  return results;
}

json cmd_robust(const RunConfig& cfg, Verdicts& v) {
  const InterferenceGraph g = build_graph(cfg.r, true);
  const auto directed = orient_edges(g, order_pi_star(g), EdgeSelector::Out);

  // The instance from the robustness discussion: the joint pipeline cannot
  // decode when a hears nothing but c still hears b and d.
  constexpr int kKnownFailureConfig = 0b11010000;  // [0,0,0,0,1,0,1,1]

  const bool run_sweep = cfg.exhaustive_neighborhood || cfg.random_states == 0;
  json per_seed = json::array();
  bool robust_clean = true, joint_fails_known = true, oracle_ok = true;
  bool all_ones_ok = true, pair_rank_ok = true, states_ok = true;
  for (int k = 0; k < cfg.seeds; ++k) {
    const std::uint64_t s = cfg.seed + static_cast<std::uint64_t>(k);
    const ChannelSet ch = sample_channels(g, cfg.M, s);
    const BeamformerSet bf = design_beamformers(g, directed, ch, s);
    json entry;
    entry["seed"] = s;
    if (run_sweep) {
      const Cell& cell = sweep_cell(g);
      const NeighborhoodSweep rob = sweep_neighborhood(g, ch, bf, cell, SweepMode::PiSRobust);
      const NeighborhoodSweep joint =
          sweep_neighborhood(g, ch, bf, cell, SweepMode::PiStarJoint);
      robust_clean = robust_clean && rob.failures.empty();
      bool known = false;
      for (const auto& f : joint.failures)
        if (f.config == kKnownFailureConfig) known = true;
      joint_fails_known = joint_fails_known && known;
      for (const auto& f : rob.failures)
        all_ones_ok = all_ones_ok && f.config != 255;
      for (const auto& f : joint.failures)
        all_ones_ok = all_ones_ok && f.config != 255;
      oracle_ok = oracle_ok && rob.case_oracle_agrees;
      pair_rank_ok =
          pair_rank_ok && rob.min_pair_sigma > 1e-8 * rob.max_pair_sigma;
      json jf = json::array();
      for (const auto& f : joint.failures) jf.push_back({{"config", f.config}, {"node", f.node}});
      entry["sweep"] = {{"configs", rob.configs_tested},
                        {"robust_failures", rob.failures.size()},
                        {"joint_failures", jf},
                        {"case_histogram", rob.case_histogram},
                        {"min_pair_sigma", rob.min_pair_sigma},
                        {"max_pair_sigma", rob.max_pair_sigma}};
    }
    if (cfg.random_states > 0) {
      SimulationConfig sim;
      sim.seed = s;
      int decoded_states = 0;
      for (int i = 0; i < cfg.random_states; ++i) {
        const CompoundState st =
            CompoundState::random(ch, s + 0x9E37ULL * static_cast<std::uint64_t>(i + 1));
        const SimulationResult res = simulate_robust_full(g, ch, bf, sim, st);
        if (res.all_decoded) ++decoded_states;
      }
      states_ok = states_ok && decoded_states == cfg.random_states;
      entry["random_states"] = {{"count", cfg.random_states}, {"decoded", decoded_states}};
    }
    per_seed.push_back(entry);
  }

  json results;
  results["per_seed"] = per_seed;
  if (run_sweep) {
    v.add("robust-all-256-configs", robust_clean);
    v.add("joint-fails-known-config", joint_fails_known,
          "config " + std::to_string(kKnownFailureConfig));
    v.add("all-ones-config-succeeds", all_ones_ok);
    v.add("case-oracle-agreement", oracle_ok);
    v.add("pair-systems-full-rank", pair_rank_ok);
  }
  if (cfg.random_states > 0) v.add("random-states-decode", states_ok);
  return results;
}

json cmd_verify(const RunConfig& cfg, Verdicts& v) {
  json results;
  results["design"] = cmd_design(cfg, v);

  const InterferenceGraph g = build_graph(cfg.r, true);
  // Order equivalence and the positional order properties.
  bool p1 = true, p2 = true, p3 = true;
  DecodingOrder pi_s;
  try {
    pi_s = order_pi_s(g);  // construction itself validates P1
  } catch (const std::exception&) {
    p1 = false;
  }
  if (p1) {
    for (const auto& c : g.cells()) {
      if (!c.full() || c.external_d < 0) continue;
      const int rb = pi_s.rank[static_cast<std::size_t>(c.secondary_b)];
      const int rc = pi_s.rank[static_cast<std::size_t>(c.secondary_c)];
      const int rd = pi_s.rank[static_cast<std::size_t>(c.external_d)];
      if (!(rb == rc && rd < rb)) p2 = false;
      if (!(pi_s.rank[static_cast<std::size_t>(c.primary)] < rb)) p2 = false;
    }
  }
  const auto directed = orient_edges(g, order_pi_star(g), EdgeSelector::Out);
  const auto in_lists = in_edge_lists(g.node_count(), directed);
  for (const auto& n : g.nodes()) {
    const int cap = n.coset == Coset::Circle ? 1 : n.coset == Coset::Diamond ? 2 : 3;
    if (static_cast<int>(in_lists[static_cast<std::size_t>(n.id)].size()) > cap) p3 = false;
  }
  v.add("order-equivalence-P1", p1);
  v.add("order-external-before-pair-P2", p2);
  v.add("in-degree-caps-P3", p3);
  results["order_properties"] = {{"p1", p1}, {"p2", p2}, {"p3", p3}};

  // End-to-end noiseless decode in all three pipelines.
  json decode;
  for (const std::string mode : {"no-intra", "intra-joint", "robust"}) {
    RunConfig sub = cfg;
    sub.mode = mode;
    sub.snr_db = {20.0};
    Verdicts dummy;
    RunOutput scratch;
    const json res = cmd_simulate(sub, dummy, scratch);
    const bool ok = res["noiseless"]["all_decoded"].get<bool>();
    decode[mode] = res["noiseless"];
    v.add("decode-" + mode, ok);
  }
  results["decode"] = decode;
  return results;
}

json cmd_all(const RunConfig& cfg, Verdicts& v, RunOutput& out) {
  json results;
  results["graph"] = cmd_graph(cfg, v, out);
  results["bounds"] = cmd_bounds(cfg, v);
  results["verify"] = cmd_verify(cfg, v);
  RunConfig rcfg = cfg;
  rcfg.seeds = 1;
  results["robust"] = cmd_robust(rcfg, v);
  return results;
}

std::string timestamp_utc() {
  const std::time_t now = std::time(nullptr);
  char buf[32];
  std::tm tm_utc{};
  gmtime_r(&now, &tm_utc);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

}  // namespace

RunOutput run_command(const RunConfig& cfg) {
  if (cfg.r < 1) throw std::invalid_argument("r must be >= 1");
  if (cfg.M < 1) throw std::invalid_argument("M must be >= 1");
  if (cfg.seeds < 1) throw std::invalid_argument("seeds must be >= 1");
  if (cfg.trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (!cfg.order.empty() && cfg.order != "pi-star" && cfg.order != "pi-s")
    throw std::invalid_argument("unknown order: " + cfg.order);

  RunOutput out;
  Verdicts v;
  json results;
  if (cfg.command == "graph")
    results = cmd_graph(cfg, v, out);
  else if (cfg.command == "design")
    results = cmd_design(cfg, v);
  else if (cfg.command == "simulate")
    results = cmd_simulate(cfg, v, out);
  else if (cfg.command == "bounds")
    results = cmd_bounds(cfg, v);
  else if (cfg.command == "robust")
    results = cmd_robust(cfg, v);
  else if (cfg.command == "verify")
    results = cmd_verify(cfg, v);
  else if (cfg.command == "all")
    results = cmd_all(cfg, v, out);
  else
    throw std::invalid_argument("unknown command: " + cfg.command);

  json report;
  report["command"] = cfg.command;
  report["config"] = config_echo(cfg);
  report["library"] = {{"name", library_name()},
                       {"version", library_version()},
                       {"rng", "splitmix64-boxmuller"}};
  report["results"] = results;
  report["verdicts"] = v.list;
  report["pass"] = v.pass;
  if (cfg.emit_timestamp) report["generated_at"] = timestamp_utc();
  out.report_json = report.dump(2) + "\n";
  out.verdicts_pass = v.pass;
  return out;
}

}  // namespace cellia
