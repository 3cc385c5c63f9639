#pragma once

// Command-line front end: `eval`, `sweep` and `convert`. Kept in a header so
// the test suite can drive the exact same code path in-process.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include <CLI11.hpp>

#include "weaktie/weaktie.hpp"

namespace weaktie::cli {

/// Exit codes.
enum Exit : int { Ok = 0, Usage = 1, Data = 2, Runtime = 3 };

struct RunConfig {
  std::string data;
  std::string format = "pajek";
  std::string index;
  std::string mode = "unweighted";
  std::string grid = "standard";
  std::size_t runs = 100;
  std::size_t L = 100;
  double probe_fraction = 0.1;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  std::string out;
  std::string out_format;
  std::string verify_counts;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline DatasetFormat dataset_format(const std::string& name) {
  auto f = parse_dataset_format(name);
  if (!f) throw UsageError("unknown format '" + name + "' (pajek, edgelist, papers)");
  return *f;
}

inline Family family(const std::string& name) {
  auto f = parse_family(name);
  if (!f) throw UsageError("unknown index '" + name + "' (cn, aa, ra)");
  return *f;
}

/// `unweighted`, `weighted` (alpha = 1) or a numeric exponent.
inline IndexSpec index_spec(Family f, const std::string& mode) {
  if (mode == "unweighted") return IndexSpec::unweighted(f);
  if (mode == "weighted") return IndexSpec::parameterized(f, 1.0);
  auto alpha = weaktie::detail::parse_double(mode);
  if (!alpha || !std::isfinite(*alpha))
    throw UsageError("mode must be 'unweighted', 'weighted' or a number, got '" + mode + "'");
  return IndexSpec::parameterized(f, *alpha);
}

inline std::string hex64(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

inline Dataset load(const RunConfig& cfg, std::ostream& err) {
  Dataset ds;
  try {
    ds = load_dataset(cfg.data, dataset_format(cfg.format));
  } catch (const ParseError& e) {
    throw DataError(cfg.data + ": " + e.what());
  } catch (const GraphError& e) {
    throw DataError(cfg.data + ": " + e.what());
  } catch (const IoError& e) {
    throw DataError(e.what());
  }
  if (!cfg.verify_counts.empty()) {
    auto parts = weaktie::detail::split_on(cfg.verify_counts, ',');
    std::optional<long long> nodes, edges;
    if (parts.size() == 2) {
      nodes = weaktie::detail::parse_int(weaktie::detail::trim(parts[0]));
      edges = weaktie::detail::parse_int(weaktie::detail::trim(parts[1]));
    }
    if (!nodes || !edges) throw UsageError("--verify-counts expects N,M");
    if (static_cast<std::size_t>(*nodes) != ds.graph.node_count() ||
        static_cast<std::size_t>(*edges) != ds.graph.edge_count())
      throw DataError(cfg.data + ": expected " + std::to_string(*nodes) + " nodes / " +
                      std::to_string(*edges) + " edges, loaded " +
                      std::to_string(ds.graph.node_count()) + " / " +
                      std::to_string(ds.graph.edge_count()));
  }
  err << "# dataset " << cfg.data << " format=" << cfg.format << " fnv1a64=" << hex64(ds.checksum)
      << " nodes=" << ds.graph.node_count() << " edges=" << ds.graph.edge_count() << '\n';
  return ds;
}

inline void banner(const RunConfig& cfg, std::ostream& err, const std::string& what) {
  err << "# " << what << " index=" << cfg.index << " runs=" << cfg.runs << " L=" << cfg.L
      << " probe_fraction=" << cfg.probe_fraction << " seed=" << cfg.seed
      << " threads=" << cfg.threads << '\n';
}

inline std::string output_format(const RunConfig& cfg) {
  if (!cfg.out_format.empty()) return cfg.out_format;
  auto ends_with = [&](const std::string& s) {
    return cfg.out.size() >= s.size() && cfg.out.compare(cfg.out.size() - s.size(), s.size(), s) == 0;
  };
  return ends_with(".json") ? "json" : "csv";
}

template <class Write>
void write_output(const std::string& path, Write&& write) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw DataError("cannot open output file '" + path + "'");
  write(f);
  if (!f) throw DataError("error writing output file '" + path + "'");
}

inline Protocol protocol(const RunConfig& cfg) {
  return Protocol{cfg.runs, cfg.L, cfg.probe_fraction, cfg.seed, cfg.threads};
}

}  // namespace detail

inline int cmd_eval(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const IndexSpec spec = detail::index_spec(detail::family(cfg.index), cfg.mode);
  Dataset ds = detail::load(cfg, err);
  detail::banner(cfg, err, "eval mode=" + cfg.mode);
  ExperimentReport report = run_realizations(ds.graph, spec, detail::protocol(cfg));
  out << spec.name() << ' ' << paper_style(report.mean, report.stddev) << '\n';
  if (!cfg.out.empty()) {
    const std::string fmt = detail::output_format(cfg);
    detail::write_output(cfg.out, [&](std::ostream& f) {
      if (fmt == "json")
        f << report_json(report).dump(2) << '\n';
      else
        write_report_csv(f, report);
    });
  }
  return Ok;
}

inline int cmd_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const Family fam = detail::family(cfg.index);
  std::vector<double> grid;
  try {
    grid = parse_grid(cfg.grid);
  } catch (const ExperimentError& e) {
    throw UsageError(e.what());
  }
  Dataset ds = detail::load(cfg, err);
  detail::banner(cfg, err, "sweep grid=" + cfg.grid + " points=" + std::to_string(grid.size()));
  SweepCurve curve = alpha_sweep(ds.graph, fam, grid, detail::protocol(cfg));
  Optimum best = find_optimal_alpha(curve);
  const auto it = std::find(curve.grid.begin(), curve.grid.end(), best.alpha);
  const auto& at = curve.reports[static_cast<std::size_t>(it - curve.grid.begin())];
  char alpha[32];
  std::snprintf(alpha, sizeof alpha, "%.2f", best.alpha);
  out << "W" << IndexSpec::unweighted(fam).name() << "* alpha=" << alpha << " precision="
      << paper_style(best.precision, at.stddev) << '\n';
  if (!cfg.out.empty()) {
    const std::string fmt = detail::output_format(cfg);
    detail::write_output(cfg.out, [&](std::ostream& f) {
      if (fmt == "json")
        f << curve_json(curve).dump(2) << '\n';
      else
        write_curve_csv(f, curve);
    });
  }
  return Ok;
}

/// Canonical weighted edge list: collapsed edges, one `a<TAB>b<TAB>w` row per
/// edge with a < b, rows sorted by label pair, weights round-trip exact.
inline void write_canonical_edgelist(std::ostream& out, const WeightedGraph& g) {
  std::vector<std::tuple<std::string, std::string, double>> rows;
  rows.reserve(g.edge_count());
  for (const Edge& e : g.edges()) {
    std::string a = g.label(e.u), b = g.label(e.v);
    if (b < a) std::swap(a, b);
    rows.emplace_back(std::move(a), std::move(b), e.weight);
  }
  std::sort(rows.begin(), rows.end());
  char w[40];
  for (const auto& [a, b, weight] : rows) {
    std::snprintf(w, sizeof w, "%.17g", weight);
    out << a << '\t' << b << '\t' << w << '\n';
  }
}

inline int cmd_convert(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  Dataset ds = detail::load(cfg, err);
  detail::write_output(cfg.out, [&](std::ostream& f) { write_canonical_edgelist(f, ds.graph); });
  out << "wrote " << ds.graph.edge_count() << " edges to " << cfg.out << '\n';
  return Ok;
}

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Link prediction with weighted local similarity indices"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto add_data = [&](CLI::App* sub) {
    sub->add_option("--data", cfg.data, "Dataset file")->required();
    sub->add_option("--format", cfg.format, "pajek | edgelist | papers")
        ->check(CLI::IsMember({"pajek", "edgelist", "papers"}))
        ->capture_default_str();
    sub->add_option("--verify-counts", cfg.verify_counts, "Expected node,edge counts after load");
  };
  auto add_protocol = [&](CLI::App* sub) {
    sub->add_option("--index", cfg.index, "cn | aa | ra")->required();
    sub->add_option("--runs", cfg.runs, "Independent random splits")->capture_default_str()
        ->check(CLI::PositiveNumber);
    sub->add_option("-L,--L", cfg.L, "Top-L cutoff for precision")->capture_default_str()
        ->check(CLI::PositiveNumber);
    sub->add_option("--probe-fraction", cfg.probe_fraction, "Held-out fraction of links")
        ->capture_default_str()
        ->check(CLI::Range(0.0, 1.0));
    sub->add_option("--seed", cfg.seed, "Master seed")->capture_default_str();
    sub->add_option("--threads", cfg.threads, "Worker threads (0 = auto)")->capture_default_str();
    sub->add_option("--out", cfg.out, "Output file");
    sub->add_option("--out-format", cfg.out_format, "csv | json (default from extension)")
        ->check(CLI::IsMember({"csv", "json"}));
  };

  CLI::App* eval = app.add_subcommand("eval", "Mean precision of one index over random splits");
  add_data(eval);
  add_protocol(eval);
  eval->add_option("--mode", cfg.mode, "unweighted | weighted | <alpha>")->capture_default_str();

  CLI::App* sweep = app.add_subcommand("sweep", "Precision as a function of the weight exponent");
  add_data(sweep);
  add_protocol(sweep);
  sweep->add_option("--grid", cfg.grid, "min:max:step | standard | extended")->capture_default_str();

  CLI::App* convert = app.add_subcommand("convert", "Write a canonical weighted edge list");
  add_data(convert);
  convert->add_option("--out", cfg.out, "Output edge list")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return Ok;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return Ok;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return Usage;
  }

  try {
    if (eval->parsed()) return cmd_eval(cfg, out, err);
    if (sweep->parsed()) return cmd_sweep(cfg, out, err);
    return cmd_convert(cfg, out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return Usage;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << '\n';
    return Data;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return Runtime;
  }
}

}  // namespace weaktie::cli
