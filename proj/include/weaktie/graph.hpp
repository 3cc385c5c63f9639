#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "weaktie/error.hpp"

namespace weaktie {

/// Dense node handle, valid in [0, node_count) of the graph that issued it.
struct NodeId {
  std::uint32_t index = 0;

  friend constexpr auto operator<=>(NodeId, NodeId) = default;
};

/// One raw link as read from a dataset. `line` is the source line when the
/// record came from a parser (0 otherwise) and is only used in diagnostics.
struct EdgeRecord {
  std::string source;
  std::string target;
  double weight = 1.0;
  std::size_t line = 0;
};

struct Neighbor {
  NodeId id;
  double weight;
};

/// Undirected edge with `u < v`.
struct Edge {
  NodeId u;
  NodeId v;
  double weight;
};

/// Unordered node pair packed into one integer (smaller id in the high word),
/// so pair sets sort in (x, y) order.
constexpr std::uint64_t pair_key(NodeId a, NodeId b) noexcept {
  if (b < a) std::swap(a, b);
  return (std::uint64_t{a.index} << 32) | b.index;
}

constexpr std::pair<NodeId, NodeId> unpack_pair(std::uint64_t key) noexcept {
  return {NodeId{static_cast<std::uint32_t>(key >> 32)},
          NodeId{static_cast<std::uint32_t>(key & 0xffffffffu)}};
}

/**
 * Immutable undirected simple graph with strictly positive edge weights.
 *
 * Storage is CSR: each node's neighbors are sorted by id, and every edge is
 * stored twice with the same weight. Once built the graph is never modified,
 * so concurrent readers need no synchronization.
 */
class WeightedGraph {
 public:
  WeightedGraph() = default;

  /// Builds a graph over the given labels from already-validated, collapsed
  /// edges (each unordered pair at most once, `u != v`, weight > 0).
  static WeightedGraph from_edges(std::vector<std::string> labels,
                                  std::span<const Edge> edges) {
    WeightedGraph g;
    g.labels_ = std::move(labels);
    const std::size_t n = g.labels_.size();
    g.index_.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
      g.index_.emplace(g.labels_[i], static_cast<std::uint32_t>(i));

    g.offsets_.assign(n + 1, 0);
    for (const Edge& e : edges) {
      if (e.u.index >= n || e.v.index >= n)
        throw GraphError("edge endpoint out of range");
      if (e.u == e.v) throw GraphError("self-loop on node '" + g.labels_[e.u.index] + "'");
      if (!(e.weight > 0.0) || !std::isfinite(e.weight))
        throw GraphError("non-positive or non-finite edge weight");
      ++g.offsets_[e.u.index + 1];
      ++g.offsets_[e.v.index + 1];
    }
    for (std::size_t i = 0; i < n; ++i) g.offsets_[i + 1] += g.offsets_[i];

    g.adjacency_.resize(g.offsets_[n]);
    std::vector<std::size_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
    for (const Edge& e : edges) {
      g.adjacency_[cursor[e.u.index]++] = Neighbor{e.v, e.weight};
      g.adjacency_[cursor[e.v.index]++] = Neighbor{e.u, e.weight};
    }
    for (std::size_t i = 0; i < n; ++i) {
      auto first = g.adjacency_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[i]);
      auto last = g.adjacency_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[i + 1]);
      std::sort(first, last, [](const Neighbor& a, const Neighbor& b) { return a.id < b.id; });
      if (std::adjacent_find(first, last, [](const Neighbor& a, const Neighbor& b) {
            return a.id == b.id;
          }) != last)
        throw GraphError("duplicate edge at node '" + g.labels_[i] + "'");
    }
    g.edge_count_ = edges.size();
    return g;
  }

  std::size_t node_count() const noexcept { return labels_.size(); }
  std::size_t edge_count() const noexcept { return edge_count_; }

  bool contains(NodeId x) const noexcept { return x.index < labels_.size(); }

  std::span<const Neighbor> neighbors(NodeId x) const {
    check(x);
    return {adjacency_.data() + offsets_[x.index], offsets_[x.index + 1] - offsets_[x.index]};
  }

  std::size_t degree(NodeId x) const {
    check(x);
    return offsets_[x.index + 1] - offsets_[x.index];
  }

  /// Sum of incident weights raised to `alpha`. alpha = 0 yields the degree,
  /// alpha = 1 the plain strength.
  double strength(NodeId x, double alpha) const {
    double s = 0.0;
    for (const Neighbor& n : neighbors(x)) s += std::pow(n.weight, alpha);
    return s;
  }

  /// Sorted intersection of the neighbor lists of two distinct nodes.
  std::vector<NodeId> common_neighbors(NodeId x, NodeId y) const {
    if (x == y) throw GraphError("common_neighbors requires two distinct nodes");
    std::vector<NodeId> out;
    merge_common(x, y, [&](const Neighbor& a, const Neighbor&) { out.push_back(a.id); });
    return out;
  }

  /// Linear merge over two sorted neighbor lists; calls
  /// `fn(entry_in_x, entry_in_y)` for each common neighbor in ascending id.
  template <class Fn>
  void merge_common(NodeId x, NodeId y, Fn&& fn) const {
    auto a = neighbors(x);
    auto b = neighbors(y);
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
      if (a[i].id < b[j].id) {
        ++i;
      } else if (b[j].id < a[i].id) {
        ++j;
      } else {
        fn(a[i], b[j]);
        ++i;
        ++j;
      }
    }
  }

  std::optional<double> weight(NodeId x, NodeId y) const {
    auto nb = neighbors(x);
    check(y);
    auto it = std::lower_bound(nb.begin(), nb.end(), y,
                               [](const Neighbor& n, NodeId id) { return n.id < id; });
    if (it == nb.end() || it->id != y) return std::nullopt;
    return it->weight;
  }

  bool has_edge(NodeId x, NodeId y) const { return weight(x, y).has_value(); }

  const std::string& label(NodeId x) const {
    check(x);
    return labels_[x.index];
  }

  const std::vector<std::string>& labels() const noexcept { return labels_; }

  std::optional<NodeId> find(std::string_view label) const {
    auto it = index_.find(std::string(label));
    if (it == index_.end()) return std::nullopt;
    return NodeId{it->second};
  }

  /// All edges with u < v, ordered by (u, v).
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count_);
    for (std::uint32_t x = 0; x < node_count(); ++x)
      for (const Neighbor& n : neighbors(NodeId{x}))
        if (x < n.id.index) out.push_back(Edge{NodeId{x}, n.id, n.weight});
    return out;
  }

 private:
  void check(NodeId x) const {
    if (!contains(x))
      throw GraphError("node id " + std::to_string(x.index) + " out of range (node_count " +
                       std::to_string(node_count()) + ")");
  }

  std::vector<std::string> labels_;
  std::unordered_map<std::string, std::uint32_t> index_;
  std::vector<std::size_t> offsets_{0};
  std::vector<Neighbor> adjacency_;
  std::size_t edge_count_ = 0;
};

namespace detail {

inline std::string describe(const EdgeRecord& r, std::size_t position) {
  std::string s = "record " + std::to_string(position + 1);
  if (r.line) s += " (line " + std::to_string(r.line) + ")";
  return s + " ('" + r.source + "', '" + r.target + "')";
}

}  // namespace detail

/**
 * Interns labels in first-appearance order and collapses repeated undirected
 * pairs by summing their weights (in input order).
 *
 * `declared_labels` are interned first, so nodes without any edge (e.g. a
 * Pajek vertex that appears in no edge line) still exist in the graph.
 *
 * Throws GraphError naming the offending record for self-loops, empty labels,
 * and weights that are not finite and strictly positive.
 */
inline WeightedGraph build_graph(std::span<const EdgeRecord> records,
                                 std::span<const std::string> declared_labels = {}) {
  std::vector<std::string> labels;
  std::unordered_map<std::string, std::uint32_t> index;
  auto intern = [&](const std::string& label) {
    auto [it, inserted] = index.emplace(label, static_cast<std::uint32_t>(labels.size()));
    if (inserted) labels.push_back(label);
    return NodeId{it->second};
  };
  for (const std::string& label : declared_labels) {
    if (label.empty()) throw GraphError("empty declared node label");
    intern(label);
  }

  struct Keyed {
    std::uint64_t key;
    double weight;
  };
  std::vector<Keyed> keyed;
  keyed.reserve(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    const EdgeRecord& r = records[i];
    if (r.source.empty() || r.target.empty())
      throw GraphError("empty node label in " + detail::describe(r, i));
    if (r.source == r.target) throw GraphError("self-loop in " + detail::describe(r, i));
    if (!std::isfinite(r.weight) || !(r.weight > 0.0))
      throw GraphError("weight " + std::to_string(r.weight) + " is not finite and positive in " +
                       detail::describe(r, i));
    NodeId a = intern(r.source);
    NodeId b = intern(r.target);
    keyed.push_back(Keyed{pair_key(a, b), r.weight});
  }

  std::stable_sort(keyed.begin(), keyed.end(),
                   [](const Keyed& a, const Keyed& b) { return a.key < b.key; });
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < keyed.size();) {
    double w = 0.0;
    std::size_t j = i;
    for (; j < keyed.size() && keyed[j].key == keyed[i].key; ++j) w += keyed[j].weight;
    auto [u, v] = unpack_pair(keyed[i].key);
    edges.push_back(Edge{u, v, w});
    i = j;
  }
  return WeightedGraph::from_edges(std::move(labels), edges);
}

inline WeightedGraph build_graph(std::initializer_list<EdgeRecord> records) {
  return build_graph(std::span<const EdgeRecord>(records.begin(), records.size()));
}

}  // namespace weaktie
