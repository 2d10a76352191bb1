#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "ctdg/cases.hpp"
#include "ctdg/scheme.hpp"

namespace ctdg {

struct RunConfig {
  CaseId case_id = CaseId::A1Convergence;
  SchemeConfig scheme;
  int resolution = 8;  // ne on the sphere, N = nx = nz on the slice
  double dt = 0.0;     // 0: case default for the resolution
  int steps = -1;      // < 0: one full flow period
  std::string out_dir; // empty: no files written
};

nlohmann::json to_json(const RunConfig& c);
/// Keys as in to_json; missing keys keep the values already in `base`.
RunConfig run_config_from_json(const nlohmann::json& j, RunConfig base = {});

struct StepRecord {
  int step = 0;
  double t = 0.0;
  double integral_rho = 0.0;
  double integral_rhoX = 0.0;
  double delta_rhoX_rel = 0.0;
  double m_min = 0.0;
  double m_max = 0.0;
  int limited_cells = 0;
  int unfixable_cells = 0;
  double l2_error = 0.0;
};

struct RunResult {
  RunConfig config;
  double dt = 0.0;
  int steps = 0;
  double dx = 0.0;
  std::string scheme;
  std::string solver;
  std::vector<StepRecord> series; // steps + 1 rows, the first at t = 0
  Field rho;
  std::vector<Field> ms, ms_initial;

  double max_delta_rhoX() const;
  double mean_delta_rhoX() const;
  double final_l2() const { return series.empty() ? 0.0 : series.back().l2_error; }
  /// Largest |m - m(0)| / |m(0)| over nodes and tracers at the end.
  double max_relative_deviation() const;
};

/// Runs a case; writes series.csv and metadata.json when out_dir is set.
RunResult run_case(const RunConfig& config);

struct SweepResult {
  std::vector<int> resolutions;
  std::vector<double> dx, l2, max_delta_rhoX;
  double slope = 0.0;
};

/// Runs the configuration at each resolution over one full period.
SweepResult sweep(const RunConfig& base, const std::vector<int>& resolutions);

void write_series_csv(const RunResult& r, const std::string& path);
nlohmann::json run_metadata(const RunResult& r);
std::string version_string();

} // namespace ctdg
