#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <span>
#include <string_view>
#include <string>
#include <thread>
#include <vector>

#include "weaktie/error.hpp"
#include "weaktie/graph.hpp"

namespace weaktie {

/// Local index family: common neighbours, Adamic-Adar, resource allocation.
enum class Family { CN, AA, RA };

inline const char* to_string(Family f) {
  switch (f) {
    case Family::CN: return "cn";
    case Family::AA: return "aa";
    case Family::RA: return "ra";
  }
  return "?";
}

inline std::optional<Family> parse_family(std::string_view s) {
  if (s == "cn" || s == "CN") return Family::CN;
  if (s == "aa" || s == "AA") return Family::AA;
  if (s == "ra" || s == "RA") return Family::RA;
  return std::nullopt;
}

/**
 * Index selector. Without an exponent the index ignores weights; with one,
 * every weight enters as w^alpha and node strength is the sum of w^alpha
 * over incident links. alpha = 1 gives the simply weighted indices.
 */
struct IndexSpec {
  Family family = Family::CN;
  std::optional<double> alpha;

  static IndexSpec unweighted(Family f) { return {f, std::nullopt}; }
  static IndexSpec parameterized(Family f, double a) {
    if (!std::isfinite(a)) throw GraphError("weight exponent must be finite");
    return {f, a};
  }

  bool weighted() const noexcept { return alpha.has_value(); }

  std::string name() const {
    std::string base = to_string(family);
    for (char& c : base) c = static_cast<char>(c - 'a' + 'A');
    if (!alpha) return base;
    char buf[32];
    std::snprintf(buf, sizeof buf, "W%s(alpha=%g)", base.c_str(), *alpha);
    return buf;
  }
};

struct ScoredPair {
  NodeId x;  // x < y
  NodeId y;
  double score;
};

/// Positive-score candidates in rank order plus the number of remaining
/// non-edges, all of which score zero and are not materialized.
struct CandidateRanking {
  std::vector<ScoredPair> pairs;
  std::uint64_t unlisted = 0;
};

/// Number of unordered node pairs that are not edges of `g`.
inline std::uint64_t non_edge_count(const WeightedGraph& g) {
  const std::uint64_t n = g.node_count();
  return n * (n - (n > 0)) / 2 - g.edge_count();
}

namespace detail {

// Both the pairwise and the enumerating scorer go through these helpers and
// sum over common neighbours in ascending id, so they agree bit for bit.

/// Per-common-neighbour divisor: 1 for CN, ln k or ln(1+s) for AA, k or s for RA.
inline double divisor(const IndexSpec& spec, std::size_t degree, double strength) {
  switch (spec.family) {
    case Family::CN: return 1.0;
    case Family::AA:
      return spec.weighted() ? std::log(1.0 + strength) : std::log(static_cast<double>(degree));
    case Family::RA:
      return spec.weighted() ? strength : static_cast<double>(degree);
  }
  return 1.0;
}

inline double numerator(const IndexSpec& spec, double w_xz, double w_zy) {
  return spec.weighted() ? std::pow(w_xz, *spec.alpha) + std::pow(w_zy, *spec.alpha) : 1.0;
}

}  // namespace detail

/// Similarity of two distinct nodes, computed from the graph as given (pass
/// the training graph).
inline double score_pair(const WeightedGraph& g, const IndexSpec& spec, NodeId x, NodeId y) {
  if (x == y) throw GraphError("score_pair requires two distinct nodes");
  double score = 0.0;
  g.merge_common(x, y, [&](const Neighbor& xz, const Neighbor& yz) {
    const double s = spec.weighted() ? g.strength(xz.id, *spec.alpha) : 0.0;
    score += detail::numerator(spec, xz.weight, yz.weight) /
             detail::divisor(spec, g.degree(xz.id), s);
  });
  return score;
}

/**
 * Precomputed per-node divisors and per-link powered weights for one
 * (graph, spec). Scores match score_pair exactly; use it when scoring many
 * pairs of the same graph.
 */
class PairScorer {
 public:
  PairScorer(const WeightedGraph& g, const IndexSpec& spec) : g_(&g), spec_(spec) {
    const std::size_t n = g.node_count();
    divisor_.resize(n);
    offset_.resize(n + 1, 0);
    for (std::uint32_t z = 0; z < n; ++z) {
      auto nb = g.neighbors(NodeId{z});
      offset_[z + 1] = offset_[z] + nb.size();
      double s = 0.0;
      for (const Neighbor& e : nb) {
        const double p = spec.weighted() ? std::pow(e.weight, *spec.alpha) : 1.0;
        powered_.push_back(p);
        s += p;
      }
      divisor_[z] = detail::divisor(spec, nb.size(), spec.weighted() ? s : 0.0);
    }
  }

  const WeightedGraph& graph() const noexcept { return *g_; }
  const IndexSpec& spec() const noexcept { return spec_; }

  double operator()(NodeId x, NodeId y) const {
    if (x == y) throw GraphError("score_pair requires two distinct nodes");
    auto a = g_->neighbors(x);
    auto b = g_->neighbors(y);
    const double* pa = powered_.data() + offset_[x.index];
    const double* pb = powered_.data() + offset_[y.index];
    double score = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
      if (a[i].id < b[j].id) {
        ++i;
      } else if (b[j].id < a[i].id) {
        ++j;
      } else {
        score += term(pa[i], pb[j], a[i].id);
        ++i;
        ++j;
      }
    }
    return score;
  }

  /// Contribution of common neighbour z given the powered weights of x-z, z-y.
  double term(double p_xz, double p_zy, NodeId z) const {
    const double num = spec_.weighted() ? p_xz + p_zy : 1.0;
    return num / divisor_[z.index];
  }

  /// Powered weights of `x`'s links, parallel to `graph().neighbors(x)`.
  std::span<const double> powered(NodeId x) const {
    return {powered_.data() + offset_[x.index], offset_[x.index + 1] - offset_[x.index]};
  }

 private:
  const WeightedGraph* g_;
  IndexSpec spec_;
  std::vector<double> divisor_;
  std::vector<std::size_t> offset_;
  std::vector<double> powered_;
};

/// Total rank order: score descending, then (x, y) ascending.
inline bool rank_before(const ScoredPair& a, const ScoredPair& b) {
  if (a.score != b.score) return a.score > b.score;
  if (a.x != b.x) return a.x < b.x;
  return a.y < b.y;
}

/**
 * Scores every non-edge with at least one common neighbour by walking the
 * length-2 paths x-z-y (x < y) out of each source x, accumulating into a
 * dense scratch array that is reset per source. Cost is O(sum_z k(z)^2).
 *
 * Sources are split across `threads` workers (0 = hardware concurrency);
 * the output does not depend on the worker count.
 */
inline CandidateRanking rank_candidates(const WeightedGraph& g, const IndexSpec& spec,
                                        unsigned threads = 1) {
  const PairScorer scorer(g, spec);
  const std::uint32_t n = static_cast<std::uint32_t>(g.node_count());
  std::vector<std::vector<ScoredPair>> per_source(n);

  auto work = [&](std::atomic<std::uint32_t>& next) {
    std::vector<double> acc(n, 0.0);
    std::vector<std::uint32_t> stamp(n, UINT32_MAX);  // == x when y is adjacent to x
    std::vector<std::uint8_t> touched(n, 0);
    std::vector<std::uint32_t> hits;
    for (std::uint32_t x; (x = next.fetch_add(1, std::memory_order_relaxed)) < n;) {
      const NodeId src{x};
      auto nx = g.neighbors(src);
      auto px = scorer.powered(src);
      for (const Neighbor& e : nx) stamp[e.id.index] = x;
      for (std::size_t i = 0; i < nx.size(); ++i) {
        const NodeId z = nx[i].id;
        auto nz = g.neighbors(z);
        auto pz = scorer.powered(z);
        for (std::size_t j = 0; j < nz.size(); ++j) {
          const std::uint32_t y = nz[j].id.index;
          if (y <= x || stamp[y] == x) continue;
          if (!touched[y]) {
            touched[y] = 1;
            hits.push_back(y);
          }
          acc[y] += scorer.term(px[i], pz[j], z);
        }
      }
      std::sort(hits.begin(), hits.end());
      auto& out = per_source[x];
      for (std::uint32_t y : hits) {
        if (acc[y] > 0.0) out.push_back(ScoredPair{src, NodeId{y}, acc[y]});
        acc[y] = 0.0;
        touched[y] = 0;
      }
      hits.clear();
    }
  };

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  std::atomic<std::uint32_t> next{0};
  if (threads == 1) {
    work(next);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back([&] { work(next); });
  }

  CandidateRanking ranking;
  std::size_t total = 0;
  for (const auto& v : per_source) total += v.size();
  ranking.pairs.reserve(total);
  for (auto& v : per_source) ranking.pairs.insert(ranking.pairs.end(), v.begin(), v.end());
  std::sort(ranking.pairs.begin(), ranking.pairs.end(), rank_before);
  ranking.unlisted = non_edge_count(g) - ranking.pairs.size();
  return ranking;
}

}  // namespace weaktie
