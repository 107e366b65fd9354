#include "channel.hpp"

#include <stdexcept>

#include "rng.hpp"

namespace cellia {

const CMat& ChannelSet::cross(int rx, int tx) const {
  auto it = cross_.find({rx, tx});
  if (it == cross_.end())
    throw std::invalid_argument("ChannelSet::cross: no such interfering link");
  return it->second;
}

CompoundState CompoundState::all_ones(const ChannelSet& ch) {
  CompoundState s;
  for (const auto& [key, _] : ch.cross_links()) s.alpha[key] = 1;
  return s;
}

CompoundState CompoundState::all_zeros(const ChannelSet& ch) {
  CompoundState s;
  for (const auto& [key, _] : ch.cross_links()) s.alpha[key] = 0;
  return s;
}

CompoundState CompoundState::random(const ChannelSet& ch, std::uint64_t seed) {
  CompoundState s;
  SplitMix64 rng = substream(seed, 0xC0117D5ULL);
  for (const auto& [key, _] : ch.cross_links())
    s.alpha[key] = static_cast<std::uint8_t>(rng.next() & 1);
  return s;
}

ChannelSet sample_channels(const InterferenceGraph& g, int M, std::uint64_t seed) {
  if (M < 1) throw std::invalid_argument("sample_channels: M must be >= 1");

  ChannelSet ch(M, seed);
  SplitMix64 rng(seed);
  auto draw = [&rng, M]() {
    CMat h(M, M);
    for (int row = 0; row < M; ++row)
      for (int col = 0; col < M; ++col) h(row, col) = rng.gaussian();
    return h;
  };

  ch.mutable_direct().reserve(g.nodes().size());
  for (const auto& n : g.nodes()) {
    (void)n;
    ch.mutable_direct().push_back(draw());
  }

  // Both orientations of every edge, visited in (rx, tx) key order.
  std::map<LinkKey, CMat>& cross = ch.mutable_cross();
  auto add_keys = [&cross](const InterferenceGraph::Edge& e) {
    cross.emplace(LinkKey{e.first, e.second}, CMat());
    cross.emplace(LinkKey{e.second, e.first}, CMat());
  };
  for (const auto& e : g.out_edges()) add_keys(e);
  for (const auto& e : g.intra_edges()) add_keys(e);
  for (auto& [key, h] : cross) h = draw();

  return ch;
}

ChannelSet apply_compound(const ChannelSet& ch, const CompoundState& state) {
  if (state.alpha.size() != ch.cross_links().size())
    throw std::invalid_argument("apply_compound: key sets differ");
  ChannelSet masked(ch.antennas(), ch.seed());
  masked.mutable_direct() = ch.direct_links();  // direct links untouched
  for (const auto& [key, h] : ch.cross_links()) {
    auto it = state.alpha.find(key);
    if (it == state.alpha.end())
      throw std::invalid_argument("apply_compound: key sets differ");
    masked.mutable_cross()[key] = it->second ? h : CMat(CMat::Zero(h.rows(), h.cols()));
  }
  return masked;
}

}  // namespace cellia
