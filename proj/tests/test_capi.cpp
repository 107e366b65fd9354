#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstring>
#include <string>

#include "cellia.h"
#include "doctest.h"

namespace {

struct Owned {
  char* s = nullptr;
  ~Owned() { cellia_string_free(s); }
  std::string str() const { return s == nullptr ? std::string() : std::string(s); }
};

}  // namespace

TEST_CASE("graph handle lifecycle and counts") {
  cellia_graph* g = nullptr;
  REQUIRE(cellia_graph_build(1, 1, &g) == CELLIA_OK);
  CHECK(cellia_graph_node_count(g) == 7);
  CHECK(cellia_graph_out_edge_count(g) == 8);
  CHECK(cellia_graph_intra_edge_count(g) == 4);
  CHECK(cellia_graph_triangle_count(g) == 2);

  Owned js, dot, ranks;
  CHECK(cellia_graph_to_json(g, &js.s) == CELLIA_OK);
  CHECK(js.str().find("\"out_edges\"") != std::string::npos);
  CHECK(cellia_graph_to_dot(g, "pi-s", &dot.s) == CELLIA_OK);
  CHECK(dot.str().rfind("digraph", 0) == 0);
  CHECK(cellia_order_ranks_json(g, "pi-star", &ranks.s) == CELLIA_OK);
  CHECK(ranks.str().find("\"rank\"") != std::string::npos);
  cellia_graph_free(g);
}

TEST_CASE("error paths set status and message") {
  cellia_graph* g = nullptr;
  CHECK(cellia_graph_build(0, 1, &g) == CELLIA_ERR_INVALID_ARGUMENT);
  CHECK(std::strlen(cellia_last_error()) > 0);
  CHECK(cellia_graph_build(1, 1, nullptr) == CELLIA_ERR_INVALID_ARGUMENT);
  CHECK(cellia_graph_node_count(nullptr) == -1);

  REQUIRE(cellia_graph_build(1, 1, &g) == CELLIA_OK);
  Owned out;
  CHECK(cellia_graph_to_dot(g, "sideways", &out.s) == CELLIA_ERR_INVALID_ARGUMENT);
  cellia_channels* ch = nullptr;
  CHECK(cellia_channels_sample(g, 0, 1, &ch) == CELLIA_ERR_INVALID_ARGUMENT);
  cellia_graph_free(g);
}

TEST_CASE("design pipeline through the C surface") {
  cellia_graph* g = nullptr;
  REQUIRE(cellia_graph_build(3, 1, &g) == CELLIA_OK);
  cellia_channels* ch = nullptr;
  REQUIRE(cellia_channels_sample(g, 2, 7, &ch) == CELLIA_OK);
  cellia_design* d = nullptr;
  REQUIRE(cellia_design_build(g, ch, 7, &d) == CELLIA_OK);
  CHECK(cellia_design_average_streams(d) == 1.0);

  double residual = 1.0, sigma = 0.0;
  CHECK(cellia_design_verify(g, ch, d, &residual, &sigma) == CELLIA_OK);
  CHECK(residual <= 1e-8);
  CHECK(sigma > 1e-6);

  cellia_design_free(d);
  cellia_channels_free(ch);
  cellia_graph_free(g);
}

TEST_CASE("one-call runner: reports, determinism, verdict status") {
  cellia_run_config cfg;
  cellia_run_config_init(&cfg);
  cfg.command = "bounds";
  cfg.r = 1;
  cfg.M = 2;
  cfg.exact_q1 = 1;
  cfg.emit_timestamp = 0;

  Owned a, b;
  CHECK(cellia_run(&cfg, &a.s, nullptr, nullptr) == CELLIA_OK);
  CHECK(cellia_run(&cfg, &b.s, nullptr, nullptr) == CELLIA_OK);
  CHECK(a.str() == b.str());
  CHECK(a.str().find("\"opt_sum\": 8") != std::string::npos);

  cellia_run_config bad = cfg;
  bad.command = "nope";
  Owned c;
  CHECK(cellia_run(&bad, &c.s, nullptr, nullptr) == CELLIA_ERR_INVALID_ARGUMENT);

  cellia_run_config sim = cfg;
  sim.command = "simulate";
  sim.r = 2;
  sim.mode = "robust";
  Owned rep, csv, dot;
  CHECK(cellia_run(&sim, &rep.s, &csv.s, &dot.s) == CELLIA_OK);
  CHECK(rep.str().find("\"all_decoded\": true") != std::string::npos);
  CHECK(csv.str().find("id,a,b,coset") == 0);
}

TEST_CASE("version string") {
  CHECK(std::strlen(cellia_version()) > 0);
}
