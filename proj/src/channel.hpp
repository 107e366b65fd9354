#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "graph.hpp"
#include "linalg.hpp"

namespace cellia {

/// Cross-link key: (receiver, transmitter). Both orientations of every
/// undirected edge carry their own matrix.
using LinkKey = std::pair<int, int>;

class ChannelSet {
 public:
  ChannelSet() = default;
  ChannelSet(int M, std::uint64_t seed) : M_(M), seed_(seed) {}

  int antennas() const { return M_; }
  std::uint64_t seed() const { return seed_; }

  const CMat& direct(int node) const { return direct_[static_cast<std::size_t>(node)]; }
  const std::vector<CMat>& direct_links() const { return direct_; }
  bool has_cross(int rx, int tx) const { return cross_.count({rx, tx}) > 0; }
  /// Gain matrix from transmitter tx into receiver rx; throws if no such link.
  const CMat& cross(int rx, int tx) const;

  const std::map<LinkKey, CMat>& cross_links() const { return cross_; }
  std::vector<CMat>& mutable_direct() { return direct_; }
  std::map<LinkKey, CMat>& mutable_cross() { return cross_; }

 private:
  int M_ = 0;
  std::uint64_t seed_ = 0;
  std::vector<CMat> direct_;
  std::map<LinkKey, CMat> cross_;
};

/// Binary presence mask over the cross links; direct links are always on.
struct CompoundState {
  std::map<LinkKey, std::uint8_t> alpha;

  static CompoundState all_ones(const ChannelSet& ch);
  static CompoundState all_zeros(const ChannelSet& ch);
  static CompoundState random(const ChannelSet& ch, std::uint64_t seed);
};

/// i.i.d. CN(0,1) entries for every direct link and both orientations of
/// every graph edge. Draw order is fixed (direct links by node id, then
/// cross links by (rx,tx)), row-major within a matrix, SplitMix64 + polar
/// Box-Muller, so regeneration with the same seed is bit-identical.
ChannelSet sample_channels(const InterferenceGraph& g, int M, std::uint64_t seed);

/// Pointwise mask: each cross matrix scaled by its bit. Key sets must match.
ChannelSet apply_compound(const ChannelSet& ch, const CompoundState& state);

}  // namespace cellia
