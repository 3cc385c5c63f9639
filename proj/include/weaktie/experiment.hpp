#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <mutex>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include "weaktie/error.hpp"
#include "weaktie/graph.hpp"
#include "weaktie/indices.hpp"
#include "weaktie/ingest.hpp"
#include "weaktie/metrics.hpp"
#include "weaktie/random.hpp"

namespace weaktie {

/// One random holdout: the training graph keeps every node and the weights
/// of the edges it retains; `probe_edges` are the held-out edges.
struct SplitResult {
  WeightedGraph train_graph;
  ProbeSet probe;
  std::vector<Edge> probe_edges;
  std::uint64_t seed = 0;
};

/// Held-out edge count: round-to-nearest of fraction * edge_count.
inline std::size_t probe_size(std::size_t edge_count, double probe_fraction) {
  return static_cast<std::size_t>(std::llround(probe_fraction * static_cast<double>(edge_count)));
}

/**
 * Holds out round(probe_fraction * |E|) edges chosen uniformly without
 * replacement. Deterministic in (g, probe_fraction, seed).
 */
inline SplitResult split_edges(const WeightedGraph& g, double probe_fraction, std::uint64_t seed) {
  if (!(probe_fraction > 0.0 && probe_fraction < 1.0))
    throw ExperimentError("probe fraction must lie strictly between 0 and 1");
  if (g.edge_count() < 2) throw ExperimentError("splitting requires at least two edges");
  std::vector<Edge> edges = g.edges();
  const std::size_t m = edges.size();
  const std::size_t k = probe_size(m, probe_fraction);
  if (k == 0 || k == m)
    throw ExperimentError("degenerate split: probe would hold " + std::to_string(k) + " of " +
                          std::to_string(m) + " edges");

  Rng rng(seed);
  for (std::size_t i = 0; i < k; ++i) {
    std::size_t j = std::uniform_int_distribution<std::size_t>(i, m - 1)(rng);
    std::swap(edges[i], edges[j]);
  }

  SplitResult out;
  out.seed = seed;
  out.probe_edges.assign(edges.begin(), edges.begin() + static_cast<std::ptrdiff_t>(k));
  std::vector<std::pair<NodeId, NodeId>> pairs;
  pairs.reserve(k);
  for (const Edge& e : out.probe_edges) pairs.emplace_back(e.u, e.v);
  out.probe = ProbeSet(pairs);
  std::span<const Edge> train(edges.data() + k, m - k);
  out.train_graph = WeightedGraph::from_edges(g.labels(), train);
  return out;
}

/// Precision over repeated random holdouts of one index.
struct ExperimentReport {
  IndexSpec spec;
  std::size_t L = 100;
  std::size_t n_runs = 0;
  double probe_fraction = 0.1;
  std::uint64_t master_seed = 0;
  std::vector<double> per_run;
  double mean = 0.0;
  double stddev = 0.0;  // sample (n - 1) deviation; 0 for a single run
};

/// Protocol parameters shared by realizations and sweeps.
struct Protocol {
  std::size_t n_runs = 100;
  std::size_t L = 100;
  double probe_fraction = 0.1;
  std::uint64_t master_seed = 0;
  unsigned threads = 1;  // 0 = hardware concurrency
};

inline std::pair<double, double> mean_and_std(std::span<const double> xs) {
  if (xs.empty()) return {0.0, 0.0};
  const double n = static_cast<double>(xs.size());
  const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  if (xs.size() == 1) return {mean, 0.0};
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / (n - 1.0))};
}

namespace detail {

/// Runs `body(i)` for i in [0, count) on up to `threads` workers. The first
/// exception is rethrown after all workers stop, prefixed with its run index.
template <class Body>
void parallel_runs(std::size_t count, unsigned threads, Body&& body) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(count, 1)));
  std::atomic<std::size_t> next{0};
  std::mutex mu;
  std::optional<std::pair<std::size_t, std::string>> failure;
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < count;) {
      try {
        body(i);
      } catch (const std::exception& e) {
        std::lock_guard lock(mu);
        if (!failure || i < failure->first) failure.emplace(i, e.what());
        next = count;
      }
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) throw ExperimentError("run " + std::to_string(failure->first) + ": " + failure->second);
}

inline ExperimentReport make_report(const IndexSpec& spec, const Protocol& p, std::vector<double> per_run) {
  ExperimentReport r;
  r.spec = spec;
  r.L = p.L;
  r.n_runs = p.n_runs;
  r.probe_fraction = p.probe_fraction;
  r.master_seed = p.master_seed;
  r.per_run = std::move(per_run);
  std::tie(r.mean, r.stddev) = mean_and_std(r.per_run);
  return r;
}

}  // namespace detail

/**
 * Repeats split / rank / precision n_runs times. Run i splits with
 * derive_seed(master, i, Split) and breaks ties with derive_seed(master, i,
 * Tie), so two calls with the same master seed see the same splits whatever
 * the index or thread count.
 */
inline ExperimentReport run_realizations(const WeightedGraph& g, const IndexSpec& spec, const Protocol& p) {
  if (p.n_runs < 1) throw ExperimentError("n_runs must be at least 1");
  if (p.L < 1) throw ExperimentError("L must be at least 1");
  std::vector<double> per_run(p.n_runs);
  detail::parallel_runs(p.n_runs, p.threads, [&](std::size_t i) {
    SplitResult split = split_edges(g, p.probe_fraction, derive_seed(p.master_seed, i, StreamTag::Split));
    CandidateRanking ranking = rank_candidates(split.train_graph, spec);
    per_run[i] = precision_at_L(ranking, split.probe, p.L, derive_seed(p.master_seed, i, StreamTag::Tie));
  });
  return detail::make_report(spec, p, std::move(per_run));
}

/// Precision as a function of the weight exponent for one family.
struct SweepCurve {
  Family family = Family::CN;
  std::vector<double> grid;
  std::vector<ExperimentReport> reports;
};

/**
 * One run_realizations per grid point with Parameterized(alpha). Every grid
 * point reuses the same splits and tie seeds (run i is identical across
 * alpha), which is what run_realizations would produce point by point.
 */
inline SweepCurve alpha_sweep(const WeightedGraph& g, Family family, std::span<const double> grid,
                              const Protocol& p) {
  if (grid.empty()) throw ExperimentError("alpha grid is empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(grid[i])) throw ExperimentError("alpha grid contains a non-finite value");
    if (i && !(grid[i - 1] < grid[i])) throw ExperimentError("alpha grid must be strictly increasing");
  }
  if (p.n_runs < 1) throw ExperimentError("n_runs must be at least 1");
  if (p.L < 1) throw ExperimentError("L must be at least 1");

  std::vector<std::vector<double>> precision(grid.size(), std::vector<double>(p.n_runs));
  detail::parallel_runs(p.n_runs, p.threads, [&](std::size_t i) {
    SplitResult split = split_edges(g, p.probe_fraction, derive_seed(p.master_seed, i, StreamTag::Split));
    const std::uint64_t tie_seed = derive_seed(p.master_seed, i, StreamTag::Tie);
    for (std::size_t a = 0; a < grid.size(); ++a) {
      CandidateRanking ranking = rank_candidates(split.train_graph, IndexSpec::parameterized(family, grid[a]));
      precision[a][i] = precision_at_L(ranking, split.probe, p.L, tie_seed);
    }
  });

  SweepCurve curve;
  curve.family = family;
  curve.grid.assign(grid.begin(), grid.end());
  for (std::size_t a = 0; a < grid.size(); ++a)
    curve.reports.push_back(
        detail::make_report(IndexSpec::parameterized(family, grid[a]), p, std::move(precision[a])));
  return curve;
}

struct Optimum {
  double alpha = 0.0;
  double precision = 0.0;
};

/// Grid point with the highest mean precision; ties go to the smallest |alpha|.
inline Optimum find_optimal_alpha(const SweepCurve& curve) {
  if (curve.reports.empty()) throw ExperimentError("empty sweep curve");
  std::size_t best = 0;
  for (std::size_t i = 1; i < curve.reports.size(); ++i) {
    const double m = curve.reports[i].mean, mb = curve.reports[best].mean;
    if (m > mb || (m == mb && std::abs(curve.grid[i]) < std::abs(curve.grid[best]))) best = i;
  }
  return {curve.grid[best], curve.reports[best].mean};
}

/// Evenly spaced grid min, min + step, ... <= max. Points are rounded to 1e-9
/// so that, e.g., -1.5:1.5:0.05 contains exactly 0.
inline std::vector<double> make_grid(double min, double max, double step) {
  if (!std::isfinite(min) || !std::isfinite(max) || !std::isfinite(step))
    throw ExperimentError("alpha grid bounds must be finite");
  if (min > max) throw ExperimentError("alpha grid minimum exceeds maximum");
  if (!(step > 0.0)) throw ExperimentError("alpha grid step must be positive");
  std::vector<double> out;
  const double tolerance = 1e-9 * step;
  for (std::size_t i = 0;; ++i) {
    const double raw = min + static_cast<double>(i) * step;
    if (raw > max + tolerance) break;
    out.push_back(std::round(raw * 1e9) / 1e9 + 0.0);
  }
  return out;
}

/// Grid used when none is given; brackets every optimum reported for the
/// three reference networks.
inline std::vector<double> standard_grid() { return make_grid(-1.5, 1.5, 0.05); }

/// Standard grid extended down to -5 for curves that keep rising as alpha
/// decreases.
inline std::vector<double> extended_grid() { return make_grid(-5.0, 1.5, 0.05); }

/// Parses `min:max:step`, `standard`, or `extended`.
inline std::vector<double> parse_grid(std::string_view spec) {
  if (spec == "standard") return standard_grid();
  if (spec == "extended") return extended_grid();
  auto parts = detail::split_on(spec, ':');
  if (parts.size() != 3) throw ExperimentError("grid must be 'min:max:step', 'standard' or 'extended'");
  double v[3];
  for (int i = 0; i < 3; ++i) {
    auto parsed = detail::parse_double(detail::trim(parts[static_cast<std::size_t>(i)]));
    if (!parsed) throw ExperimentError("malformed grid value '" + std::string(parts[static_cast<std::size_t>(i)]) + "'");
    v[i] = *parsed;
  }
  return make_grid(v[0], v[1], v[2]);
}

}  // namespace weaktie
