#include "graph.hpp"

#include <algorithm>
#include <stdexcept>

#include "json.hpp"

namespace cellia {

namespace {

// Floor division (C++ integer division truncates toward zero).
long long floor_div(long long x, long long y) {
  long long q = x / y;
  if ((x % y != 0) && ((x < 0) != (y < 0))) --q;
  return q;
}

}  // namespace

Eisenstein cell_key_of(Eisenstein label) {
  switch (coset_of(label)) {
    case Coset::Circle: return label;
    case Coset::Diamond: return label - kOne;
    case Coset::Square: return label + kOmega;
  }
  return label;
}

int InterferenceGraph::node_id(Eisenstein z) const {
  auto it = index_.find(z);
  return it == index_.end() ? -1 : it->second;
}

bool InterferenceGraph::adjacent(int u, int v) const {
  const auto& a = out_adj_[static_cast<std::size_t>(u)];
  if (std::find(a.begin(), a.end(), v) != a.end()) return true;
  const auto& b = intra_adj_[static_cast<std::size_t>(u)];
  return std::find(b.begin(), b.end(), v) != b.end();
}

InterferenceGraph build_graph(int r, bool include_intra) {
  if (r < 1) throw std::invalid_argument("build_graph: r must be >= 1");

  InterferenceGraph g;
  g.r_ = r;
  g.include_intra_ = include_intra;

  // Nodes in raster order: b descending, a ascending.
  for (std::int64_t b = r; b >= -r; --b) {
    for (std::int64_t a = -2 * r; a <= 2 * r; ++a) {
      const Eisenstein z{a, b};
      if (!in_region(z, r)) continue;
      const int id = static_cast<int>(g.nodes_.size());
      g.nodes_.push_back({id, z, coset_of(z)});
      g.index_.emplace(z, id);
    }
  }

  // Every unordered interfering pair is a segment of exactly one triangle
  // anchor: {z,z+w} and {z,z+w+1} carry anchor z, the horizontal pair
  // {w,w+1} carries anchor w-omega. Anchors may lie outside the region as
  // long as both segment endpoints are inside, so scan a padded box.
  auto add_segment = [&g](Eisenstein p, Eisenstein q, bool intra) {
    const int u = g.node_id(p);
    const int v = g.node_id(q);
    if (u < 0 || v < 0) return;
    auto e = std::minmax(u, v);
    if (intra)
      g.intra_edges_.emplace_back(e.first, e.second);
    else
      g.out_edges_.emplace_back(e.first, e.second);
  };
  for (std::int64_t b = -static_cast<std::int64_t>(r) - 1; b <= r + 1; ++b) {
    for (std::int64_t a = -2 * static_cast<std::int64_t>(r) - 2; a <= 2 * r + 2; ++a) {
      const Eisenstein z{a, b};
      const bool intra = coset_of(z) == Coset::Square;
      if (intra && !include_intra) continue;
      const Eisenstein zw = z + kOmega;
      const Eisenstein zw1 = z + kOmega + kOne;
      add_segment(z, zw, intra);
      add_segment(z, zw1, intra);
      add_segment(zw, zw1, intra);
    }
  }
  std::sort(g.out_edges_.begin(), g.out_edges_.end());
  std::sort(g.intra_edges_.begin(), g.intra_edges_.end());

  g.out_adj_.assign(g.nodes_.size(), {});
  g.intra_adj_.assign(g.nodes_.size(), {});
  for (const auto& [u, v] : g.out_edges_) {
    g.out_adj_[static_cast<std::size_t>(u)].push_back(v);
    g.out_adj_[static_cast<std::size_t>(v)].push_back(u);
  }
  for (const auto& [u, v] : g.intra_edges_) {
    g.intra_adj_[static_cast<std::size_t>(u)].push_back(v);
    g.intra_adj_[static_cast<std::size_t>(v)].push_back(u);
  }

  // Triangles: anchors of nonzero coset with all three vertices in-region,
  // enumerated in raster order of the anchor.
  for (std::int64_t b = r; b >= -static_cast<std::int64_t>(r) - 1; --b) {
    for (std::int64_t a = -2 * static_cast<std::int64_t>(r) - 2; a <= 2 * r + 2; ++a) {
      const Eisenstein z{a, b};
      if (coset_of(z) == Coset::Square) continue;
      const int i = g.node_id(z);
      const int j = g.node_id(z + kOmega);
      const int k = g.node_id(z + kOmega + kOne);
      if (i < 0 || j < 0 || k < 0) continue;
      g.triangles_.push_back({z, {i, j, k}});
    }
  }

  auto& cls = g.classification_;
  cls.n_v.assign(g.nodes_.size(), 0);
  for (const auto& t : g.triangles_)
    for (int m : t.members) ++cls.n_v[static_cast<std::size_t>(m)];
  for (const auto& n : g.nodes_) {
    if (cls.n_v[static_cast<std::size_t>(n.id)] == 2)
      cls.interior.push_back(n.id);
    else
      cls.exterior.push_back(n.id);
  }

  for (const auto& n : g.nodes_) {
    if (n.coset != Coset::Circle) continue;
    Cell c;
    c.key = n.label;
    c.primary = n.id;
    c.secondary_b = g.node_id(n.label + kOne);
    c.secondary_c = g.node_id(n.label - kOmega);
    c.external_d = g.node_id(n.label - kOmega - kOne);
    g.cells_.push_back(c);
  }

  return g;
}

CardinalityFormulas cardinality_formulas(int r) {
  if (r < 1) throw std::invalid_argument("cardinality_formulas: r must be >= 1");
  CardinalityFormulas f;
  const long long rr = r;
  f.n_nodes = 4 * rr * rr + 3 * rr + (r % 2 == 0 ? 1 : 0);
  f.n_triangles = rr * (4 * rr - floor_div(rr - 2, 3) - 2 * floor_div(rr - 1, 3) -
                        floor_div(rr + 1, 3) - 3);
  f.vex_bound = 12 * rr + 2;
  return f;
}

std::pair<double, double> triangle_sum_check(const InterferenceGraph& g,
                                             const std::vector<double>& x) {
  if (x.size() != g.nodes().size())
    throw std::invalid_argument("triangle_sum_check: size mismatch");
  double lhs = 0.0;
  for (double v : x) lhs += v;
  double rhs = 0.0;
  for (const auto& t : g.triangles())
    rhs += (x[static_cast<std::size_t>(t.members[0])] +
            x[static_cast<std::size_t>(t.members[1])] +
            x[static_cast<std::size_t>(t.members[2])]) / 2.0;
  const auto& cls = g.classification();
  for (int u : cls.exterior)
    rhs += (1.0 - cls.n_v[static_cast<std::size_t>(u)] / 2.0) * x[static_cast<std::size_t>(u)];
  return {lhs, rhs};
}

std::string InterferenceGraph::to_json() const {
  nlohmann::json j;
  j["r"] = r_;
  j["include_intra"] = include_intra_;
  nlohmann::json nodes = nlohmann::json::array();
  for (const auto& n : nodes_) {
    nodes.push_back({{"id", n.id}, {"a", n.label.a}, {"b", n.label.b},
                     {"coset", coset_name(n.coset)}});
  }
  j["nodes"] = std::move(nodes);
  nlohmann::json oe = nlohmann::json::array();
  for (const auto& [u, v] : out_edges_) oe.push_back({u, v});
  j["out_edges"] = std::move(oe);
  nlohmann::json ie = nlohmann::json::array();
  for (const auto& [u, v] : intra_edges_) ie.push_back({u, v});
  j["intra_edges"] = std::move(ie);
  return j.dump(2);
}

std::string InterferenceGraph::to_dot(const std::vector<int>* ranks) const {
  const bool directed = ranks != nullptr;
  std::string s = directed ? "digraph interference {\n" : "graph interference {\n";
  s += "  // r=" + std::to_string(r_) + "\n";
  for (const auto& n : nodes_) {
    const char* shape = n.coset == Coset::Square   ? "box"
                        : n.coset == Coset::Circle ? "ellipse"
                                                   : "diamond";
    s += "  n" + std::to_string(n.id) + " [shape=" + shape + ", label=\"" +
         std::to_string(n.id) + ": " + to_string(n.label) + "\"];\n";
  }
  auto emit = [&](const Edge& e, bool dashed) {
    int u = e.first, v = e.second;
    std::string attr = dashed ? std::string("style=dashed") : std::string();
    if (!directed) {
      s += "  n" + std::to_string(u) + " -- n" + std::to_string(v);
    } else {
      const int ru = (*ranks)[static_cast<std::size_t>(u)];
      const int rv = (*ranks)[static_cast<std::size_t>(v)];
      // Arrow points from the interfering transmitter to the earlier decoder.
      if (ru == rv) {
        s += "  n" + std::to_string(u) + " -> n" + std::to_string(v);
        attr += attr.empty() ? "dir=none" : ", dir=none";
      } else if (ru < rv) {
        s += "  n" + std::to_string(v) + " -> n" + std::to_string(u);
      } else {
        s += "  n" + std::to_string(u) + " -> n" + std::to_string(v);
      }
    }
    if (!attr.empty()) s += " [" + attr + "]";
    s += ";\n";
  };
  for (const auto& e : out_edges_) emit(e, false);
  for (const auto& e : intra_edges_) emit(e, true);
  s += "}\n";
  return s;
}

}  // namespace cellia
