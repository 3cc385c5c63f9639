#pragma once

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

#include <json.hpp>

#include "weaktie/experiment.hpp"

namespace weaktie {

namespace detail {

inline std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

}  // namespace detail

/// "0.592(48)": mean to three decimals, standard deviation in thousandths.
inline std::string paper_style(double mean, double stddev) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f(%lld)", mean, std::llround(stddev * 1000.0));
  return buf;
}

inline const char* mode_name(const IndexSpec& spec) {
  return spec.weighted() ? "parameterized" : "unweighted";
}

// CSV: fixed column order, six decimals, LF line endings. The alpha column is
// empty for unweighted indices.

inline void write_report_csv(std::ostream& out, const ExperimentReport& r) {
  out << "index,mode,alpha,L,n_runs,probe_fraction,seed,mean_precision,std_precision\n";
  out << to_string(r.spec.family) << ',' << mode_name(r.spec) << ','
      << (r.spec.alpha ? detail::fixed6(*r.spec.alpha) : std::string()) << ',' << r.L << ','
      << r.n_runs << ',' << detail::fixed6(r.probe_fraction) << ',' << r.master_seed << ','
      << detail::fixed6(r.mean) << ',' << detail::fixed6(r.stddev) << '\n';
}

inline void write_curve_csv(std::ostream& out, const SweepCurve& c) {
  out << "alpha,mean_precision,std_precision,n_runs\n";
  for (std::size_t i = 0; i < c.grid.size(); ++i)
    out << detail::fixed6(c.grid[i]) << ',' << detail::fixed6(c.reports[i].mean) << ','
        << detail::fixed6(c.reports[i].stddev) << ',' << c.reports[i].n_runs << '\n';
}

inline nlohmann::json report_json(const ExperimentReport& r) {
  nlohmann::json j;
  j["index"] = to_string(r.spec.family);
  j["mode"] = mode_name(r.spec);
  j["alpha"] = r.spec.alpha ? nlohmann::json(*r.spec.alpha) : nlohmann::json(nullptr);
  j["L"] = r.L;
  j["n_runs"] = r.n_runs;
  j["probe_fraction"] = r.probe_fraction;
  j["seed"] = r.master_seed;
  j["mean_precision"] = r.mean;
  j["std_precision"] = r.stddev;
  j["per_run"] = r.per_run;
  return j;
}

inline nlohmann::json curve_json(const SweepCurve& c) {
  nlohmann::json j;
  j["index"] = to_string(c.family);
  if (!c.reports.empty()) {
    j["L"] = c.reports.front().L;
    j["n_runs"] = c.reports.front().n_runs;
    j["probe_fraction"] = c.reports.front().probe_fraction;
    j["seed"] = c.reports.front().master_seed;
  }
  nlohmann::json points = nlohmann::json::array();
  for (std::size_t i = 0; i < c.grid.size(); ++i)
    points.push_back({{"alpha", c.grid[i]},
                      {"mean_precision", c.reports[i].mean},
                      {"std_precision", c.reports[i].stddev},
                      {"n_runs", c.reports[i].n_runs}});
  j["points"] = std::move(points);
  if (!c.reports.empty()) {
    Optimum best = find_optimal_alpha(c);
    j["optimum"] = {{"alpha", best.alpha}, {"precision", best.precision}};
  }
  return j;
}

}  // namespace weaktie
