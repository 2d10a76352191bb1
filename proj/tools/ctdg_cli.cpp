// Command line front end: run one case, sweep resolutions, or run quick checks.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "ctdg/error.hpp"
#include "ctdg/io.hpp"
#include "ctdg/run.hpp"

using namespace ctdg;

namespace {

struct Options {
  std::string config_file, case_name, placement, form, limiter;
  int order = -1, ne = 0, nx = 0, steps = -2;
  double dt = 0.0;
  std::string out_dir;
  bool dump_fields = false;
};

void add_common(CLI::App* app, Options& o)
{
  app->add_option("--config", o.config_file, "JSON file with the same keys as the flags");
  app->add_option("--case", o.case_name, "A1-convergence | A1-consistency | A2-convergence | A2-consistency | "
                                         "A3-slotted | A4-terminator");
  app->add_option("--placement", o.placement, "co-located | staggered");
  app->add_option("--order", o.order, "element order k (0 or 1)");
  app->add_option("--form", o.form, "advective | conservative");
  app->add_option("--limiter", o.limiter, "none | mmr | baseline");
  app->add_option("--ne", o.ne, "cells per panel edge (sphere cases)");
  app->add_option("--nx", o.nx, "cells per side (slice cases)");
  app->add_option("--dt", o.dt, "timestep in seconds (default: Courant-matched)");
  app->add_option("--steps", o.steps, "number of steps (default: one full period)");
  app->add_option("--out-dir", o.out_dir, "directory for series.csv and metadata.json");
}

RunConfig build_config(const Options& o)
{
  RunConfig c;
  if (!o.config_file.empty()) {
    std::ifstream in(o.config_file);
    require(static_cast<bool>(in), "cannot open " + o.config_file);
    c = run_config_from_json(nlohmann::json::parse(in), c);
  }
  if (!o.case_name.empty()) c.case_id = parse_case(o.case_name);
  if (!o.placement.empty()) c.scheme.placement = parse_placement(o.placement);
  if (o.order >= 0) c.scheme.order = o.order;
  if (!o.form.empty()) c.scheme.form = parse_form(o.form);
  if (!o.limiter.empty()) c.scheme.limiter = parse_limiter(o.limiter);
  if (case_on_sphere(c.case_id) && o.ne > 0) c.resolution = o.ne;
  if (!case_on_sphere(c.case_id) && o.nx > 0) c.resolution = o.nx;
  if (!case_on_sphere(c.case_id) && o.config_file.empty() && o.nx <= 0) c.resolution = 40;
  if (!case_on_sphere(c.case_id)) c.scheme.placement = o.placement.empty() ? Placement::Staggered : c.scheme.placement;
  if (o.dt > 0.0) c.dt = o.dt;
  if (o.steps >= -1) c.steps = o.steps;
  if (!o.out_dir.empty()) c.out_dir = o.out_dir;
  return c;
}

void print_summary(const RunResult& r)
{
  std::cout << case_name(r.config.case_id) << ": " << r.scheme << "\n"
            << "  dt = " << r.dt << " s, steps = " << r.steps << ", dx = " << r.dx << " m\n"
            << "  max delta rho_X = " << r.max_delta_rhoX() << ", mean = " << r.mean_delta_rhoX() << "\n"
            << "  final L2 error = " << r.final_l2() << ", max relative deviation of m = "
            << r.max_relative_deviation() << "\n"
            << "  m range = [" << r.series.back().m_min << ", " << r.series.back().m_max << "]\n";
}

struct CheckItem {
  std::string name;
  bool ok;
  double value;
};

std::vector<CheckItem> quick_checks()
{
  std::vector<CheckItem> out;
  auto conserve = [&](CaseId id, Placement p, int k, int n) {
    RunConfig c;
    c.case_id = id;
    c.scheme.placement = p;
    c.scheme.order = k;
    c.resolution = n;
    c.steps = 10;
    const RunResult r = run_case(c);
    out.push_back({"conservation " + r.scheme, r.max_delta_rhoX() <= 1e-11, r.max_delta_rhoX()});
  };
  conserve(CaseId::A1Convergence, Placement::CoLocated, 1, 4);
  conserve(CaseId::A1Convergence, Placement::CoLocated, 0, 4);
  conserve(CaseId::A2Convergence, Placement::Staggered, 1, 20);
  conserve(CaseId::A2Convergence, Placement::Staggered, 0, 20);
  RunConfig c;
  c.case_id = CaseId::A1Consistency;
  c.resolution = 4;
  c.steps = 10;
  const RunResult r = run_case(c);
  out.push_back({"consistency " + r.scheme, r.max_relative_deviation() <= 1e-10, r.max_relative_deviation()});
  return out;
}

} // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Conservative DG tracer transport experiments"};
  app.require_subcommand(1);
  Options run_opts, sweep_opts, mesh_opts;

  auto* run = app.add_subcommand("run", "run one case");
  add_common(run, run_opts);
  run->add_flag("--dump-fields", run_opts.dump_fields, "also write final fields as CSV into --out-dir");

  auto* sw = app.add_subcommand("sweep", "convergence sweep over resolutions");
  add_common(sw, sweep_opts);
  std::vector<int> resolutions{40, 60, 80};
  sw->add_option("--resolutions", resolutions, "resolutions to run");

  app.add_subcommand("check", "quick conservation and consistency checks");

  auto* mesh = app.add_subcommand("mesh", "write a mesh as JSON");
  std::string mesh_kind = "sphere", mesh_out = "mesh.json";
  int mesh_n = 2;
  mesh->add_option("--kind", mesh_kind, "sphere | slice");
  mesh->add_option("-n", mesh_n, "ne or nx = nz");
  mesh->add_option("--out", mesh_out, "output path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      const RunConfig c = build_config(run_opts);
      const auto t0 = std::chrono::steady_clock::now();
      const RunResult r = run_case(c);
      print_summary(r);
      std::cout << "  wall time = "
                << std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() << " s\n";
      if (run_opts.dump_fields && !c.out_dir.empty()) {
        dump_field_csv(r.rho, (std::filesystem::path(c.out_dir) / "rho.csv").string());
        for (std::size_t i = 0; i < r.ms.size(); ++i)
          dump_field_csv(r.ms[i], (std::filesystem::path(c.out_dir) / ("m" + std::to_string(i) + ".csv")).string());
      }
    } else if (*sw) {
      const RunConfig c = build_config(sweep_opts);
      const SweepResult s = sweep(c, resolutions);
      std::cout << "resolution,dx,l2_error,max_delta_rhoX\n";
      for (std::size_t i = 0; i < s.resolutions.size(); ++i)
        std::cout << s.resolutions[i] << ',' << s.dx[i] << ',' << s.l2[i] << ',' << s.max_delta_rhoX[i] << '\n';
      std::cout << "slope = " << s.slope << '\n';
    } else if (app.got_subcommand("check")) {
      bool all = true;
      for (const auto& item : quick_checks()) {
        std::cout << (item.ok ? "PASS " : "FAIL ") << item.name << " (" << item.value << ")\n";
        all = all && item.ok;
      }
      return all ? 0 : 1;
    } else if (*mesh) {
      const Mesh m = mesh_kind == "slice" ? Mesh::slice(mesh_n, mesh_n, 2000.0, 2000.0)
                                          : Mesh::cubed_sphere(mesh_n, case_constants().radius);
      dump_mesh_json(m, mesh_out);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
