#include "ctdg/run.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>

#include "ctdg/chemistry.hpp"
#include "ctdg/diagnostics.hpp"
#include "ctdg/error.hpp"

#ifndef CTDG_VERSION
#define CTDG_VERSION "unknown"
#endif

namespace ctdg {

std::string version_string() { return std::string("ctdg ") + CTDG_VERSION; }

nlohmann::json to_json(const RunConfig& c)
{
  return {{"case", case_name(c.case_id)},
          {"placement", to_string(c.scheme.placement)},
          {"order", c.scheme.order},
          {"form", to_string(c.scheme.form)},
          {"limiter", to_string(c.scheme.limiter)},
          {"eps_factor", c.scheme.eps_factor},
          {"resolution", c.resolution},
          {"dt", c.dt},
          {"steps", c.steps},
          {"out_dir", c.out_dir}};
}

RunConfig run_config_from_json(const nlohmann::json& j, RunConfig c)
{
  require(j.is_object(), "config: expected a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (key == "case") c.case_id = parse_case(value.get<std::string>());
    else if (key == "placement") c.scheme.placement = parse_placement(value.get<std::string>());
    else if (key == "order") c.scheme.order = value.get<int>();
    else if (key == "form") c.scheme.form = parse_form(value.get<std::string>());
    else if (key == "limiter") c.scheme.limiter = parse_limiter(value.get<std::string>());
    else if (key == "eps_factor") c.scheme.eps_factor = value.get<double>();
    else if (key == "resolution" || key == "ne" || key == "nx") c.resolution = value.get<int>();
    else if (key == "dt") c.dt = value.get<double>();
    else if (key == "steps") c.steps = value.get<int>();
    else if (key == "out_dir") c.out_dir = value.get<std::string>();
    else throw Error("config: unknown key '" + key + "'");
  }
  return c;
}

double RunResult::max_delta_rhoX() const
{
  double v = 0.0;
  for (const auto& s : series) v = std::max(v, s.delta_rhoX_rel);
  return v;
}

double RunResult::mean_delta_rhoX() const
{
  if (series.size() < 2) return 0.0;
  double v = 0.0;
  for (std::size_t i = 1; i < series.size(); ++i) v += series[i].delta_rhoX_rel;
  return v / static_cast<double>(series.size() - 1);
}

double RunResult::max_relative_deviation() const
{
  double v = 0.0;
  for (std::size_t i = 0; i < ms.size(); ++i)
    for (int d = 0; d < ms[i].size(); ++d) {
      const double ref = ms_initial[i][d];
      const double diff = std::abs(ms[i][d] - ref);
      v = std::max(v, ref != 0.0 ? diff / std::abs(ref) : diff);
    }
  return v;
}

namespace {

std::shared_ptr<const Mesh> case_mesh(CaseId id, int resolution)
{
  const CaseConstants& k = case_constants();
  if (case_on_sphere(id)) return std::make_shared<const Mesh>(Mesh::cubed_sphere(resolution, k.radius));
  return std::make_shared<const Mesh>(Mesh::slice(resolution, resolution, k.lx, k.hz));
}

StepRecord record(int step, double t, const Field& rho, const std::vector<Field>& ms, const std::vector<Field>& ms0,
                  const std::vector<double>& weights, double rhoX0, const LimiterStats& stats)
{
  StepRecord r;
  r.step = step;
  r.t = t;
  r.integral_rho = integrate(rho);
  r.integral_rhoX = tracer_mass(rho, ms, weights);
  r.delta_rhoX_rel = step == 0 ? 0.0 : relative_change(r.integral_rhoX, rhoX0);
  r.m_min = ms[0].min();
  r.m_max = ms[0].max();
  for (const Field& m : ms) {
    r.m_min = std::min(r.m_min, m.min());
    r.m_max = std::max(r.m_max, m.max());
  }
  r.limited_cells = stats.limited_cells;
  r.unfixable_cells = stats.unfixable_cells;
  r.l2_error = l2_error(ms[0], ms0[0]);
  return r;
}

} // namespace

RunResult run_case(const RunConfig& config)
{
  require(config.resolution > 0, "run_case: resolution must be positive");
  const CaseId id = config.case_id;
  const auto mesh = case_mesh(id, config.resolution);
  const Scheme scheme(mesh, config.scheme, velocity_case(id));

  RunResult res;
  res.config = config;
  res.dt = config.dt > 0.0 ? config.dt : case_default_dt(id, config.resolution);
  res.steps = config.steps >= 0 ? config.steps : static_cast<int>(std::lround(case_period(id) / res.dt));
  res.dx = mesh->cell_length();
  res.scheme = scheme.describe();
  res.solver = "transport " + scheme.transport_space()->solver_description() + "; mixing ratio " +
               scheme.m_space()->solver_description();

  res.rho = interpolate(scheme.rho_space(), initial_density(id));
  for (const auto& f : initial_mixing_ratios(id)) res.ms.push_back(interpolate(scheme.m_space(), f));
  res.ms_initial = res.ms;
  const auto weights = case_tracer_weights(id);

  Field k1, k2;
  if (id == CaseId::A4Terminator) {
    const ChemistryParams& p = case_constants().chemistry;
    k1 = interpolate(scheme.m_space(), [&](const Vec3& x) {
      const auto ll = lon_lat(x);
      return reaction_rates(ll[0], ll[1], p)[0];
    });
    k2 = Field(scheme.m_space(), 1.0);
  }

  const double rhoX0 = tracer_mass(res.rho, res.ms, weights);
  res.series.push_back(record(0, 0.0, res.rho, res.ms, res.ms_initial, weights, rhoX0, {}));
  for (int n = 0; n < res.steps; ++n) {
    const double t = n * res.dt;
    LimiterStats stats;
    try {
      scheme.advance(res.rho, res.ms, t, res.dt, &stats);
      if (id == CaseId::A4Terminator) apply_chemistry_step(res.ms[0], res.ms[1], k1, k2, res.dt);
    } catch (const Error& e) {
      throw Error("step " + std::to_string(n + 1) + ": " + e.what());
    }
    res.series.push_back(
        record(n + 1, (n + 1) * res.dt, res.rho, res.ms, res.ms_initial, weights, rhoX0, stats));
  }

  if (!config.out_dir.empty()) {
    std::filesystem::create_directories(config.out_dir);
    write_series_csv(res, (std::filesystem::path(config.out_dir) / "series.csv").string());
    std::ofstream(std::filesystem::path(config.out_dir) / "metadata.json") << run_metadata(res).dump(2) << "\n";
  }
  return res;
}

SweepResult sweep(const RunConfig& base, const std::vector<int>& resolutions)
{
  SweepResult s;
  for (int n : resolutions) {
    RunConfig c = base;
    c.resolution = n;
    c.dt = 0.0;
    c.steps = -1;
    if (!base.out_dir.empty()) c.out_dir = (std::filesystem::path(base.out_dir) / ("n" + std::to_string(n))).string();
    const RunResult r = run_case(c);
    s.resolutions.push_back(n);
    s.dx.push_back(r.dx);
    s.l2.push_back(r.final_l2());
    s.max_delta_rhoX.push_back(r.max_delta_rhoX());
  }
  s.slope = convergence_slope(s.dx, s.l2);
  return s;
}

void write_series_csv(const RunResult& r, const std::string& path)
{
  std::ofstream out(path);
  require(static_cast<bool>(out), "cannot open " + path);
  out << "step,t,integral_rho,integral_rhoX,delta_rhoX_rel,m_min,m_max,limited_cells,unfixable_cells,l2_error\n";
  out << std::setprecision(17);
  for (const auto& s : r.series)
    out << s.step << ',' << s.t << ',' << s.integral_rho << ',' << s.integral_rhoX << ',' << s.delta_rhoX_rel << ','
        << s.m_min << ',' << s.m_max << ',' << s.limited_cells << ',' << s.unfixable_cells << ',' << s.l2_error
        << '\n';
}

nlohmann::json run_metadata(const RunResult& r)
{
  nlohmann::json j;
  j["version"] = version_string();
  j["config"] = to_json(r.config);
  j["scheme"] = r.scheme;
  j["limiter_label"] = r.config.scheme.limiter == LimiterKind::Baseline ? "baseline" : to_string(r.config.scheme.limiter);
  j["dt"] = r.dt;
  j["steps"] = r.steps;
  j["dx"] = r.dx;
  j["mass_solver"] = r.solver;
  j["sparse_solve_relative_tolerance"] = 1e-12;
  j["identification_guard"] = {{"eps_factor", r.config.scheme.eps_factor}, {"on_violation", "abort"}};
  j["max_delta_rhoX"] = r.max_delta_rhoX();
  j["mean_delta_rhoX"] = r.mean_delta_rhoX();
  j["final_l2_error"] = r.final_l2();
  return j;
}

} // namespace ctdg
