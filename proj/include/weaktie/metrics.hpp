#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "weaktie/error.hpp"
#include "weaktie/graph.hpp"
#include "weaktie/indices.hpp"
#include "weaktie/random.hpp"

namespace weaktie {

/// Held-out links. Stored as sorted pair keys for O(log n) membership.
class ProbeSet {
 public:
  ProbeSet() = default;

  explicit ProbeSet(std::span<const std::pair<NodeId, NodeId>> pairs) {
    keys_.reserve(pairs.size());
    for (auto [a, b] : pairs) {
      if (a == b) throw GraphError("probe pair with identical endpoints");
      keys_.push_back(pair_key(a, b));
    }
    std::sort(keys_.begin(), keys_.end());
    if (std::adjacent_find(keys_.begin(), keys_.end()) != keys_.end())
      throw GraphError("probe set contains a repeated pair");
  }

  ProbeSet(std::initializer_list<std::pair<NodeId, NodeId>> pairs)
      : ProbeSet(std::span<const std::pair<NodeId, NodeId>>(pairs.begin(), pairs.size())) {}

  std::size_t size() const noexcept { return keys_.size(); }
  bool empty() const noexcept { return keys_.empty(); }

  bool contains(NodeId a, NodeId b) const {
    return std::binary_search(keys_.begin(), keys_.end(), pair_key(a, b));
  }

  std::pair<NodeId, NodeId> operator[](std::size_t i) const { return unpack_pair(keys_[i]); }

  std::span<const std::uint64_t> keys() const noexcept { return keys_; }

  /// Throws unless every pair lies in `g` and none of them is an edge of it.
  void check_against(const WeightedGraph& g) const {
    for (std::uint64_t k : keys_) {
      auto [a, b] = unpack_pair(k);
      if (!g.contains(a) || !g.contains(b)) throw GraphError("probe pair outside the graph");
      if (g.has_edge(a, b)) throw GraphError("probe pair is an edge of the training graph");
    }
  }

 private:
  std::vector<std::uint64_t> keys_;
};

/// Two scores are tied when equal up to 1e-12 relative; this absorbs the
/// summation-order rounding between mathematically equal scores.
inline bool scores_tie(double a, double b) noexcept {
  return a == b || std::abs(a - b) <= 1e-12 * std::max(std::abs(a), std::abs(b));
}

/**
 * Fraction of the top-L candidates that are probe links.
 *
 * The tie block straddling the cutoff is sampled uniformly with `tie_seed`.
 * When fewer than L candidates have a positive score, the remaining slots
 * are filled uniformly from the zero-score non-edges (`ranking.unlisted`),
 * which form a single tie block.
 */
inline double precision_at_L(const CandidateRanking& ranking, const ProbeSet& probe,
                             std::size_t L, std::uint64_t tie_seed) {
  if (L < 1) throw ExperimentError("precision requires L >= 1");
  Rng rng(tie_seed);
  const auto& pairs = ranking.pairs;
  std::uint64_t selected = 0;
  std::uint64_t relevant = 0;
  std::uint64_t probe_listed = 0;

  std::size_t i = 0;
  while (i < pairs.size() && selected < L) {
    std::size_t j = i + 1;
    while (j < pairs.size() && scores_tie(pairs[j - 1].score, pairs[j].score)) ++j;
    std::uint64_t hits = 0;
    for (std::size_t k = i; k < j; ++k) hits += probe.contains(pairs[k].x, pairs[k].y);
    probe_listed += hits;
    const std::uint64_t block = j - i;
    if (selected + block <= L) {
      relevant += hits;
      selected += block;
    } else {
      relevant += draw_marked(block, hits, L - selected, rng);
      selected = L;
    }
    i = j;
  }

  if (selected < L) {
    // Every listed candidate was taken; the rest of the probe is unlisted.
    const std::uint64_t unlisted_hits = probe.size() - probe_listed;
    relevant += draw_marked(ranking.unlisted, unlisted_hits, L - selected, rng);
  }
  return static_cast<double>(relevant) / static_cast<double>(L);
}

/**
 * Sampled AUC: probability that a random probe link outscores a random
 * non-edge outside the probe, ties counting one half.
 */
inline double auc(const WeightedGraph& g_train, const IndexSpec& spec, const ProbeSet& probe,
                  std::uint64_t n_samples, std::uint64_t seed) {
  if (probe.empty()) throw ExperimentError("AUC requires a nonempty probe set");
  if (n_samples < 1) throw ExperimentError("AUC requires at least one sample");
  probe.check_against(g_train);
  const std::uint64_t n = g_train.node_count();
  const std::uint64_t all_pairs = n * (n - 1) / 2;
  const std::uint64_t pool = non_edge_count(g_train) - probe.size();
  if (pool == 0) throw ExperimentError("AUC requires a non-edge outside the probe set");

  const PairScorer score(g_train, spec);
  Rng rng(seed);
  std::uniform_int_distribution<std::size_t> pick_probe(0, probe.size() - 1);

  // Rejection sampling unless the pool is a tiny fraction of all pairs.
  std::vector<std::uint64_t> listed;
  if (pool * 1000 < all_pairs) {
    for (std::uint32_t x = 0; x < n; ++x)
      for (std::uint32_t y = x + 1; y < n; ++y)
        if (!g_train.has_edge(NodeId{x}, NodeId{y}) && !probe.contains(NodeId{x}, NodeId{y}))
          listed.push_back(pair_key(NodeId{x}, NodeId{y}));
  }
  std::uniform_int_distribution<std::uint32_t> pick_node(0, static_cast<std::uint32_t>(n - 1));
  auto draw_negative = [&]() -> std::pair<NodeId, NodeId> {
    if (!listed.empty())
      return unpack_pair(listed[std::uniform_int_distribution<std::size_t>(0, listed.size() - 1)(rng)]);
    for (;;) {
      NodeId a{pick_node(rng)}, b{pick_node(rng)};
      if (a == b || g_train.has_edge(a, b) || probe.contains(a, b)) continue;
      return {a, b};
    }
  };

  double total = 0.0;
  for (std::uint64_t s = 0; s < n_samples; ++s) {
    auto [px, py] = probe[pick_probe(rng)];
    auto [nx, ny] = draw_negative();
    const double positive = score(px, py);
    const double negative = score(nx, ny);
    if (scores_tie(positive, negative))
      total += 0.5;
    else if (positive > negative)
      total += 1.0;
  }
  return total / static_cast<double>(n_samples);
}

}  // namespace weaktie
