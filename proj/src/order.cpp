#include "order.hpp"

#include <algorithm>
#include <map>

#include "errors.hpp"
#include "json.hpp"

namespace cellia {

std::string DecodingOrder::to_json() const {
  nlohmann::json j;
  j["kind"] = kind == OrderKind::PiStar ? "pi-star" : "pi-s";
  j["rank"] = rank;
  j["joint_groups"] = joint_groups;
  return j.dump(2);
}

DecodingOrder order_pi_star(const InterferenceGraph& g) {
  // Node ids are assigned in raster order at graph build time.
  DecodingOrder o;
  o.kind = OrderKind::PiStar;
  o.rank.resize(g.nodes().size());
  o.joint_groups.reserve(g.nodes().size());
  for (const auto& n : g.nodes()) {
    o.rank[static_cast<std::size_t>(n.id)] = n.id;
    o.joint_groups.push_back({n.id});
  }
  return o;
}

namespace {

// Cell coordinates: circle label z satisfies z - 1 = p*(2+w) + q*(-1+w).
// p runs along the diagonal 2+w (up-right), q indexes diagonals (up-left).
struct CellCoord {
  std::int64_t p = 0;
  std::int64_t q = 0;
};

CellCoord cell_coord(Eisenstein circle_label) {
  const std::int64_t A = circle_label.a - 1;
  const std::int64_t B = circle_label.b;
  if ((A + B) % 3 != 0 || (2 * B - A) % 3 != 0)
    throw internal_error("cell_coord: label is not on the circle coset");
  return {(A + B) / 3, (2 * B - A) / 3};
}

}  // namespace

DecodingOrder order_pi_s(const InterferenceGraph& g) {
  struct Slot {
    std::vector<int> primaries;                      // node ids, keyed by p
    std::map<std::int64_t, std::vector<int>> pairs;  // p -> secondary members
  };
  // q -> diagonal content; primaries keyed by p separately for sorting.
  std::map<std::int64_t, std::map<std::int64_t, int>> primaries;  // q -> p -> id
  std::map<std::int64_t, std::map<std::int64_t, std::vector<int>>> pairs;

  for (const auto& n : g.nodes()) {
    const Eisenstein key = cell_key_of(n.label);
    const CellCoord c = cell_coord(key);
    if (n.coset == Coset::Circle)
      primaries[c.q][c.p] = n.id;
    else
      pairs[c.q][c.p].push_back(n.id);
  }

  DecodingOrder o;
  o.kind = OrderKind::PiS;
  o.rank.assign(g.nodes().size(), -1);

  std::vector<std::int64_t> qs;
  for (const auto& [q, _] : primaries) qs.push_back(q);
  for (const auto& [q, _] : pairs)
    if (std::find(qs.begin(), qs.end(), q) == qs.end()) qs.push_back(q);
  std::sort(qs.rbegin(), qs.rend());

  int rank = 0;
  for (std::int64_t q : qs) {
    if (auto it = primaries.find(q); it != primaries.end()) {
      for (auto pi = it->second.rbegin(); pi != it->second.rend(); ++pi) {
        o.rank[static_cast<std::size_t>(pi->second)] = rank++;
        o.joint_groups.push_back({pi->second});
      }
    }
    if (auto it = pairs.find(q); it != pairs.end()) {
      for (auto& [p, members] : it->second) {
        std::sort(members.begin(), members.end());
        for (int id : members) o.rank[static_cast<std::size_t>(id)] = rank;
        o.joint_groups.push_back(members);
        ++rank;
      }
    }
  }

  for (int rk : o.rank)
    if (rk < 0) throw internal_error("order_pi_s: unranked node");

  // P1: the out-of-cell orientations must match the raster order exactly.
  const auto star = orient_edges(g, order_pi_star(g), EdgeSelector::Out);
  const auto s = orient_edges(g, o, EdgeSelector::Out);
  if (star != s)
    throw internal_error("order_pi_s: out-of-cell orientations differ from pi-star");

  return o;
}

std::vector<DirectedEdge> orient_edges(const InterferenceGraph& g,
                                       const DecodingOrder& order,
                                       EdgeSelector selector) {
  std::vector<DirectedEdge> result;
  auto add = [&](const InterferenceGraph::Edge& e) {
    const int ru = order.rank[static_cast<std::size_t>(e.first)];
    const int rv = order.rank[static_cast<std::size_t>(e.second)];
    if (ru == rv) return;  // joint group: no orientation
    if (ru < rv)
      result.push_back({e.second, e.first});
    else
      result.push_back({e.first, e.second});
  };
  if (selector == EdgeSelector::Out || selector == EdgeSelector::Both)
    for (const auto& e : g.out_edges()) add(e);
  if (selector == EdgeSelector::Intra || selector == EdgeSelector::Both)
    for (const auto& e : g.intra_edges()) add(e);
  std::sort(result.begin(), result.end());
  return result;
}

}  // namespace cellia
