#include "cellia.h"

#include <cstring>
#include <string>

#include "beamformer.hpp"
#include "errors.hpp"
#include "report.hpp"

struct cellia_graph {
  cellia::InterferenceGraph g;
};
struct cellia_channels {
  cellia::ChannelSet ch;
};
struct cellia_design {
  cellia::BeamformerSet bf;
};

namespace {

thread_local std::string t_last_error;

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

template <typename Fn>
cellia_status guarded(Fn&& fn) {
  try {
    t_last_error.clear();
    return fn();
  } catch (const std::invalid_argument& e) {
    t_last_error = e.what();
    return CELLIA_ERR_INVALID_ARGUMENT;
  } catch (const cellia::degenerate_input& e) {
    t_last_error = e.what();
    return CELLIA_ERR_DEGENERATE_INPUT;
  } catch (const cellia::budget_exceeded& e) {
    t_last_error = e.what();
    return CELLIA_ERR_BUDGET_EXCEEDED;
  } catch (const std::exception& e) {
    t_last_error = e.what();
    return CELLIA_ERR_INTERNAL;
  } catch (...) {
    t_last_error = "unknown error";
    return CELLIA_ERR_INTERNAL;
  }
}

cellia::DecodingOrder make_order(const cellia::InterferenceGraph& g, const char* order) {
  if (order != nullptr && std::string(order) == "pi-s") return cellia::order_pi_s(g);
  if (order == nullptr || std::string(order).empty() || std::string(order) == "pi-star")
    return cellia::order_pi_star(g);
  throw std::invalid_argument("unknown order: " + std::string(order));
}

}  // namespace

extern "C" {

const char* cellia_version(void) { return cellia::library_version(); }

const char* cellia_last_error(void) { return t_last_error.c_str(); }

void cellia_string_free(char* s) { delete[] s; }

cellia_status cellia_graph_build(int r, int include_intra, cellia_graph** out) {
  return guarded([&]() {
    if (out == nullptr) throw std::invalid_argument("out must not be null");
    auto* handle = new cellia_graph{cellia::build_graph(r, include_intra != 0)};
    *out = handle;
    return CELLIA_OK;
  });
}

void cellia_graph_free(cellia_graph* g) { delete g; }

int cellia_graph_node_count(const cellia_graph* g) {
  return g == nullptr ? -1 : g->g.node_count();
}

int cellia_graph_out_edge_count(const cellia_graph* g) {
  return g == nullptr ? -1 : static_cast<int>(g->g.out_edges().size());
}

int cellia_graph_intra_edge_count(const cellia_graph* g) {
  return g == nullptr ? -1 : static_cast<int>(g->g.intra_edges().size());
}

int cellia_graph_triangle_count(const cellia_graph* g) {
  return g == nullptr ? -1 : static_cast<int>(g->g.triangles().size());
}

cellia_status cellia_graph_to_json(const cellia_graph* g, char** out) {
  return guarded([&]() {
    if (g == nullptr || out == nullptr) throw std::invalid_argument("null argument");
    *out = dup_string(g->g.to_json());
    return CELLIA_OK;
  });
}

cellia_status cellia_graph_to_dot(const cellia_graph* g, const char* order, char** out) {
  return guarded([&]() {
    if (g == nullptr || out == nullptr) throw std::invalid_argument("null argument");
    if (order == nullptr) {
      *out = dup_string(g->g.to_dot());
    } else {
      const cellia::DecodingOrder o = make_order(g->g, order);
      *out = dup_string(g->g.to_dot(&o.rank));
    }
    return CELLIA_OK;
  });
}

cellia_status cellia_order_ranks_json(const cellia_graph* g, const char* order, char** out) {
  return guarded([&]() {
    if (g == nullptr || out == nullptr) throw std::invalid_argument("null argument");
    *out = dup_string(make_order(g->g, order).to_json());
    return CELLIA_OK;
  });
}

cellia_status cellia_channels_sample(const cellia_graph* g, int M, uint64_t seed,
                                     cellia_channels** out) {
  return guarded([&]() {
    if (g == nullptr || out == nullptr) throw std::invalid_argument("null argument");
    *out = new cellia_channels{cellia::sample_channels(g->g, M, seed)};
    return CELLIA_OK;
  });
}

void cellia_channels_free(cellia_channels* c) { delete c; }

cellia_status cellia_design_build(const cellia_graph* g, const cellia_channels* ch,
                                  uint64_t seed, cellia_design** out) {
  return guarded([&]() {
    if (g == nullptr || ch == nullptr || out == nullptr)
      throw std::invalid_argument("null argument");
    const auto directed =
        cellia::orient_edges(g->g, cellia::order_pi_star(g->g), cellia::EdgeSelector::Out);
    *out = new cellia_design{cellia::design_beamformers(g->g, directed, ch->ch, seed)};
    return CELLIA_OK;
  });
}

void cellia_design_free(cellia_design* d) { delete d; }

double cellia_design_average_streams(const cellia_design* d) {
  return d == nullptr ? -1.0 : d->bf.average_streams();
}

cellia_status cellia_design_verify(const cellia_graph* g, const cellia_channels* ch,
                                   const cellia_design* d, double* max_residual,
                                   double* min_sigma) {
  return guarded([&]() {
    if (g == nullptr || ch == nullptr || d == nullptr)
      throw std::invalid_argument("null argument");
    const auto directed =
        cellia::orient_edges(g->g, cellia::order_pi_star(g->g), cellia::EdgeSelector::Out);
    const cellia::AlignmentReport rep =
        cellia::verify_alignment(g->g, directed, ch->ch, d->bf);
    if (max_residual != nullptr) *max_residual = rep.max_zero_forcing_residual;
    if (min_sigma != nullptr) *min_sigma = rep.min_desired_sigma;
    return CELLIA_OK;
  });
}

void cellia_run_config_init(cellia_run_config* cfg) {
  if (cfg == nullptr) return;
  static const double default_snr = 20.0;
  cfg->command = "graph";
  cfg->r = 2;
  cfg->M = 2;
  cfg->seed = 1;
  cfg->seeds = 1;
  cfg->order = "";
  cfg->mode = "no-intra";
  cfg->snr_db = &default_snr;
  cfg->n_snr = 1;
  cfg->trials = 1;
  cfg->include_intra = 1;
  cfg->exact_q1 = 0;
  cfg->exhaustive_neighborhood = 0;
  cfg->random_states = 0;
  cfg->compound_m_factor = 0;
  cfg->emit_timestamp = 1;
}

cellia_status cellia_run(const cellia_run_config* cfg, char** report_json, char** csv,
                         char** dot) {
  return guarded([&]() -> cellia_status {
    if (cfg == nullptr || report_json == nullptr)
      throw std::invalid_argument("null argument");
    cellia::RunConfig rc;
    if (cfg->command != nullptr) rc.command = cfg->command;
    rc.r = cfg->r;
    rc.M = cfg->M;
    rc.seed = cfg->seed;
    rc.seeds = cfg->seeds;
    if (cfg->order != nullptr) rc.order = cfg->order;
    if (cfg->mode != nullptr) rc.mode = cfg->mode;
    rc.snr_db.clear();
    for (int i = 0; i < cfg->n_snr; ++i) rc.snr_db.push_back(cfg->snr_db[i]);
    rc.trials = cfg->trials;
    rc.include_intra = cfg->include_intra != 0;
    rc.exact_q1 = cfg->exact_q1 != 0;
    rc.exhaustive_neighborhood = cfg->exhaustive_neighborhood != 0;
    rc.random_states = cfg->random_states;
    rc.compound_m_factor = cfg->compound_m_factor != 0;
    rc.emit_timestamp = cfg->emit_timestamp != 0;

    const cellia::RunOutput out = cellia::run_command(rc);
    *report_json = dup_string(out.report_json);
    if (csv != nullptr) *csv = dup_string(out.csv);
    if (dot != nullptr) *dot = dup_string(out.dot);
    if (!out.verdicts_pass) {
      t_last_error = "one or more verdicts failed";
      return CELLIA_ERR_VERDICT_FAILED;
    }
    return CELLIA_OK;
  });
}

}  // extern "C"
