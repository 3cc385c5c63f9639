#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "test_util.hpp"
#include "weaktie/experiment.hpp"

using namespace weaktie;

namespace {

/// Random graph with exactly `m` edges on `n` nodes.
WeightedGraph graph_with_edges(std::mt19937_64& rng, std::uint32_t n, std::size_t m) {
  std::set<std::uint64_t> keys;
  std::vector<Edge> edges;
  while (edges.size() < m) {
    NodeId a{static_cast<std::uint32_t>(rng() % n)}, b{static_cast<std::uint32_t>(rng() % n)};
    if (a == b || !keys.insert(pair_key(a, b)).second) continue;
    if (b < a) std::swap(a, b);
    edges.push_back(Edge{a, b, 1.0 + static_cast<double>(rng() % 5)});
  }
  std::vector<std::string> labels;
  for (std::uint32_t i = 0; i < n; ++i) labels.push_back(std::to_string(i));
  return WeightedGraph::from_edges(labels, edges);
}

void expect_valid_split(const WeightedGraph& g, const SplitResult& s, double fraction) {
  EXPECT_EQ(s.train_graph.node_count(), g.node_count());
  EXPECT_EQ(s.probe.size(), probe_size(g.edge_count(), fraction));
  EXPECT_EQ(s.probe_edges.size(), s.probe.size());
  EXPECT_EQ(s.train_graph.edge_count() + s.probe.size(), g.edge_count());
  for (const Edge& e : s.train_graph.edges()) {
    EXPECT_FALSE(s.probe.contains(e.u, e.v));
    EXPECT_EQ(g.weight(e.u, e.v), e.weight);
  }
  for (const Edge& e : s.probe_edges) {
    EXPECT_TRUE(s.probe.contains(e.u, e.v));
    EXPECT_FALSE(s.train_graph.has_edge(e.u, e.v));
    EXPECT_EQ(g.weight(e.u, e.v), e.weight);
  }
}

}  // namespace

TEST(Split, DegenerateSizesAreErrors) {
  auto g = build_graph({{"a", "b"}, {"b", "c"}});
  EXPECT_THROW(split_edges(g, 0.1, 1), ExperimentError);  // round(0.2) = 0
  EXPECT_THROW(split_edges(g, 0.9, 1), ExperimentError);  // round(1.8) = 2
  EXPECT_THROW(split_edges(g, 0.0, 1), ExperimentError);
  EXPECT_THROW(split_edges(g, 1.0, 1), ExperimentError);
  EXPECT_THROW(split_edges(build_graph({{"a", "b"}}), 0.5, 1), ExperimentError);
  EXPECT_NO_THROW(split_edges(g, 0.5, 1));
}

TEST(Split, AirlineSizedGraph) {
  std::mt19937_64 rng(1);
  auto g = graph_with_edges(rng, 332, 2126);
  auto s = split_edges(g, 0.1, 42);
  EXPECT_EQ(s.probe.size(), 213u);
  EXPECT_EQ(s.train_graph.edge_count(), 1913u);
  expect_valid_split(g, s, 0.1);
}

TEST(Split, Deterministic) {
  std::mt19937_64 rng(2);
  auto g = graph_with_edges(rng, 100, 400);
  auto a = split_edges(g, 0.1, 9), b = split_edges(g, 0.1, 9), c = split_edges(g, 0.1, 10);
  EXPECT_TRUE(std::ranges::equal(a.probe.keys(), b.probe.keys()));
  EXPECT_FALSE(std::ranges::equal(a.probe.keys(), c.probe.keys()));
}

TEST(Split, RandomGraphInvariants) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    auto g = weaktie::testing::random_graph(rng, 5 + rng() % 60, 0.2);
    if (probe_size(g.edge_count(), 0.1) == 0 || g.edge_count() < 2) continue;
    expect_valid_split(g, split_edges(g, 0.1, rng()), 0.1);
  }
}

TEST(Stats, MeanAndSampleStd) {
  std::vector<double> xs{0.5, 0.7, 0.6};
  auto [m, s] = mean_and_std(xs);
  EXPECT_NEAR(m, 0.6, 1e-15);
  EXPECT_NEAR(s, 0.1, 1e-15);
  std::vector<double> one{0.3};
  EXPECT_EQ(mean_and_std(one).second, 0.0);
}

TEST(Realizations, SingleRunHasZeroStd) {
  std::mt19937_64 rng(4);
  auto g = graph_with_edges(rng, 80, 300);
  auto r = run_realizations(g, IndexSpec::unweighted(Family::RA), {1, 10, 0.1, 7, 1});
  EXPECT_EQ(r.n_runs, 1u);
  ASSERT_EQ(r.per_run.size(), 1u);
  EXPECT_EQ(r.stddev, 0.0);
  EXPECT_EQ(r.mean, r.per_run[0]);
}

TEST(Realizations, DeterministicAcrossThreadCounts) {
  std::mt19937_64 rng(5);
  auto g = graph_with_edges(rng, 40, 300);
  const auto spec = IndexSpec::parameterized(Family::AA, -0.3);
  auto base = run_realizations(g, spec, {12, 20, 0.1, 99, 1});
  for (unsigned t : {2u, 5u, 0u}) {
    auto other = run_realizations(g, spec, {12, 20, 0.1, 99, t});
    EXPECT_EQ(base.per_run, other.per_run);
    EXPECT_EQ(base.mean, other.mean);
    EXPECT_EQ(base.stddev, other.stddev);
  }
  auto reseeded = run_realizations(g, spec, {12, 20, 0.1, 100, 1});
  EXPECT_NE(base.per_run, reseeded.per_run);
}

TEST(Realizations, ErrorsNameTheRun) {
  auto g = build_graph({{"a", "b"}, {"b", "c"}});
  try {
    run_realizations(g, IndexSpec::unweighted(Family::CN), {3, 10, 0.1, 1, 1});
    FAIL() << "expected ExperimentError";
  } catch (const ExperimentError& e) {
    EXPECT_NE(std::string(e.what()).find("run 0"), std::string::npos) << e.what();
  }
  EXPECT_THROW(run_realizations(g, IndexSpec::unweighted(Family::CN), {0, 10, 0.5, 1, 1}), ExperimentError);
}

TEST(Sweep, AlphaZeroMatchesUnweightedCnAndRa) {
  std::mt19937_64 rng(6);
  auto g = weaktie::testing::random_graph(rng, 120, 0.05);
  const Protocol p{20, 30, 0.1, 123, 1};
  const std::vector<double> zero{0.0};
  for (Family f : {Family::CN, Family::RA}) {
    auto curve = alpha_sweep(g, f, zero, p);
    auto plain = run_realizations(g, IndexSpec::unweighted(f), p);
    ASSERT_EQ(curve.reports.size(), 1u);
    EXPECT_EQ(curve.reports[0].per_run, plain.per_run);
  }
}

TEST(Sweep, EachPointEqualsStandaloneRealizations) {
  std::mt19937_64 rng(7);
  auto g = weaktie::testing::random_graph(rng, 100, 0.06);
  const Protocol p{8, 25, 0.1, 5, 2};
  const std::vector<double> grid{-1.0, 0.25, 1.0};
  auto curve = alpha_sweep(g, Family::AA, grid, p);
  for (std::size_t i = 0; i < grid.size(); ++i)
    EXPECT_EQ(curve.reports[i].per_run,
              run_realizations(g, IndexSpec::parameterized(Family::AA, grid[i]), p).per_run);
}

TEST(Sweep, GridValidation) {
  auto g = weaktie::testing::reference_graph();
  const Protocol p{1, 1, 0.5, 1, 1};
  EXPECT_THROW(alpha_sweep(g, Family::CN, std::vector<double>{}, p), ExperimentError);
  EXPECT_THROW(alpha_sweep(g, Family::CN, std::vector<double>{0.5, 0.5}, p), ExperimentError);
  EXPECT_THROW(alpha_sweep(g, Family::CN, std::vector<double>{1.0, 0.0}, p), ExperimentError);
}

TEST(Optimum, PicksMaximumThenSmallestMagnitude) {
  SweepCurve c;
  c.grid = {-0.5, -0.2, 0.3, 0.9};
  for (double m : {0.6, 0.7, 0.7, 0.65}) {
    ExperimentReport r;
    r.mean = m;
    c.reports.push_back(r);
  }
  auto best = find_optimal_alpha(c);
  EXPECT_EQ(best.alpha, -0.2);
  EXPECT_EQ(best.precision, 0.7);

  SweepCurve single;
  single.grid = {0.4};
  single.reports.resize(1);
  single.reports[0].mean = 0.1;
  EXPECT_EQ(find_optimal_alpha(single).alpha, 0.4);
  EXPECT_THROW(find_optimal_alpha(SweepCurve{}), ExperimentError);
}

TEST(Grid, StandardGridContainsZeroAndEndpoints) {
  auto g = standard_grid();
  ASSERT_EQ(g.size(), 61u);
  EXPECT_EQ(g.front(), -1.5);
  EXPECT_EQ(g.back(), 1.5);
  EXPECT_EQ(g[30], 0.0);
  EXPECT_FALSE(std::signbit(g[30]));
  EXPECT_NE(std::find(g.begin(), g.end(), -0.4), g.end());
  EXPECT_TRUE(std::is_sorted(g.begin(), g.end()));
  auto e = extended_grid();
  EXPECT_EQ(e.front(), -5.0);
  EXPECT_EQ(e.size(), 131u);
}

TEST(Grid, ParseErrors) {
  EXPECT_EQ(parse_grid("0:1:0.5"), (std::vector<double>{0.0, 0.5, 1.0}));
  EXPECT_EQ(parse_grid("0.2:0.2:1"), (std::vector<double>{0.2}));
  EXPECT_THROW(parse_grid("1:0:0.1"), ExperimentError);
  EXPECT_THROW(parse_grid("0:1:0"), ExperimentError);
  EXPECT_THROW(parse_grid("0:1"), ExperimentError);
  EXPECT_THROW(parse_grid("a:1:0.1"), ExperimentError);
}
