// Acceptance runs: one PASS/FAIL line per criterion, then a summary.
// The property suites (criterion 6) are the doctest cases of the remap,
// transport, limiter and physics test files linked into this binary.
#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>

#include "ctdg/cases.hpp"
#include "ctdg/chemistry.hpp"
#include "ctdg/run.hpp"

using namespace ctdg;

namespace {

int failures = 0;

void report(int id, bool ok, const std::string& what)
{
  std::printf("%s criterion %d: %s\n", ok ? "PASS" : "FAIL", id, what.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string sci(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

RunConfig config(CaseId id, Placement p, int k, TracerForm f, LimiterKind l, int res, int steps, double dt = 0.0)
{
  RunConfig c;
  c.case_id = id;
  c.scheme = {p, k, f, l};
  c.resolution = res;
  c.steps = steps;
  c.dt = dt;
  return c;
}

double seconds_since(std::chrono::steady_clock::time_point t0)
{
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void criterion1()
{
  struct Item {
    CaseId id;
    Placement p;
    int k, res, steps;
  };
  const Item items[] = {{CaseId::A1Convergence, Placement::CoLocated, 1, 8, 100},
                        {CaseId::A1Convergence, Placement::CoLocated, 0, 8, 100},
                        {CaseId::A2Convergence, Placement::Staggered, 1, 40, 200},
                        {CaseId::A2Convergence, Placement::Staggered, 0, 40, 200}};
  bool ok = true;
  std::ostringstream msg;
  msg << "tracer mass, max_t delta_rhoX <= 1e-11;";
  for (const auto& it : items) {
    const auto t0 = std::chrono::steady_clock::now();
    const RunResult r = run_case(config(it.id, it.p, it.k, TracerForm::Conservative, LimiterKind::None, it.res, it.steps));
    const double secs = seconds_since(t0);
    const double d = r.max_delta_rhoX();
    ok = ok && d <= 1e-11 && secs < 300.0;
    msg << " " << to_string(it.p) << " k=" << it.k << ": " << sci(d) << " (" << sci(secs) << " s);";
  }
  report(1, ok, msg.str());
}

void criterion2()
{
  bool ok = true;
  std::ostringstream msg;
  const RunResult co =
      run_case(config(CaseId::A1Consistency, Placement::CoLocated, 1, TracerForm::Conservative, LimiterKind::None, 8, 100));
  const double dco = co.max_relative_deviation();
  ok = ok && dco <= 1e-10;
  msg << "constant m; co-located k=1 deviation " << sci(dco) << " (<= 1e-10);";
  for (int k : {0, 1}) {
    const RunResult c =
        run_case(config(CaseId::A2Consistency, Placement::Staggered, k, TracerForm::Conservative, LimiterKind::None, 40, 200));
    const RunResult a =
        run_case(config(CaseId::A2Consistency, Placement::Staggered, k, TracerForm::Advective, LimiterKind::None, 40, 200));
    const double dc = c.max_relative_deviation(), da = a.max_relative_deviation();
    const double ratio = da > 0.0 ? dc / da : (dc == 0.0 ? 0.0 : INFINITY);
    ok = ok && ratio <= 1e-3;
    msg << " staggered k=" << k << ": conservative " << sci(dc) << ", advective " << sci(da) << ", ratio " << sci(ratio)
        << " (<= 1e-3);";
  }
  report(2, ok, msg.str());
}

void criterion3()
{
  bool ok = true;
  std::ostringstream msg;
  const std::vector<int> res{40, 60, 80};
  for (int k : {0, 1}) {
    const double need = k == 0 ? 1.7 : 1.9;
    RunConfig base = config(CaseId::A2Convergence, Placement::Staggered, k, TracerForm::Conservative, LimiterKind::None, 40, -1);
    const SweepResult cons = sweep(base, res);
    base.scheme.form = TracerForm::Advective;
    const SweepResult adv = sweep(base, res);
    ok = ok && cons.slope >= need;
    double worst = 0.0;
    for (std::size_t i = 0; i < res.size(); ++i) worst = std::max(worst, std::abs(adv.l2[i] - cons.l2[i]) / cons.l2[i]);
    ok = ok && worst <= 0.10;
    msg << " k=" << k << ": slope " << sci(cons.slope) << " (>= " << need << "), L2 {";
    for (std::size_t i = 0; i < res.size(); ++i) msg << (i ? ", " : "") << sci(cons.l2[i]);
    msg << "}, advective/conservative L2 gap " << sci(100.0 * worst) << "% (<= 10%);";
    if (k == 0) {
      // halving dx (N 40 -> 80) should cut the error at least threefold
      const double gain = cons.l2[0] / cons.l2[2];
      ok = ok && gain >= 3.0;
      msg << " N40/N80 error ratio " << sci(gain) << " (>= 3);";
    }
  }
  report(3, ok, "convergence, staggered slice N in {40,60,80};" + msg.str());
}

void criterion4()
{
  const RunResult r =
      run_case(config(CaseId::A3Slotted, Placement::CoLocated, 1, TracerForm::Conservative, LimiterKind::Mmr, 8, 200));
  double mmin = INFINITY;
  int limited = 0, unfixable = 0;
  for (const auto& row : r.series) {
    mmin = std::min(mmin, row.m_min);
    limited += row.limited_cells;
    unfixable += row.unfixable_cells;
  }
  const double d = r.max_delta_rhoX();
  const bool ok = mmin >= -1e-14 && d <= 1e-11;
  report(4, ok,
         "MMR slotted cylinders ne=8, 200 steps: min_t m_min " + sci(mmin) + " (>= -1e-14), max delta_rhoX " + sci(d) +
             " (<= 1e-11), limited cell-stages " + std::to_string(limited) + ", unfixable " + std::to_string(unfixable));
}

void criterion5()
{
  const double dt = 900.0;
  const int steps = static_cast<int>(std::lround(2 * 86400.0 / dt));
  const RunResult r =
      run_case(config(CaseId::A4Terminator, Placement::CoLocated, 1, TracerForm::Conservative, LimiterKind::Mmr, 8, steps, dt));
  const double drift = r.max_delta_rhoX();
  double xmin = INFINITY;
  for (const auto& row : r.series) xmin = std::min(xmin, row.m_min);

  // chemistry alone on the final state
  Field x = r.ms[0], x2 = r.ms[1];
  const auto& V = x.space_ptr();
  const Field k1 = interpolate(V, [](const Vec3& p) {
    const auto ll = lon_lat(p);
    return reaction_rates(ll[0], ll[1], case_constants().chemistry)[0];
  });
  const Field k2(V, 1.0);
  apply_chemistry_step(x, x2, k1, k2, dt);
  double inv = 0.0;
  for (int i = 0; i < x.size(); ++i)
    inv = std::max(inv, std::abs((x[i] + 2.0 * x2[i]) - (r.ms[0][i] + 2.0 * r.ms[1][i])));

  const bool ok = drift <= 1e-11 && xmin >= -1e-14 && inv <= 1e-16;
  report(5, ok,
         "terminator ne=8, dt=900 s, " + std::to_string(steps) + " steps: X_T mass drift " + sci(drift) +
             " (<= 1e-11), min(X, X2) " + sci(xmin) + " (>= -1e-14), chemistry-only pointwise X_T change " + sci(inv) +
             " (<= 1e-16)");
}

void criterion6(int argc, char** argv)
{
  doctest::Context ctx;
  ctx.applyCommandLine(argc, argv);
  ctx.setOption("minimal", true);
  ctx.setOption("no-intro", true);
  const int rc = ctx.run();
  report(6, rc == 0, "remap, transport, limiter and physics property suites (doctest exit code " + std::to_string(rc) + ")");
}

} // namespace

int main(int argc, char** argv)
{
  const std::string only = argc > 1 ? argv[1] : "";
  const auto want = [&only](const char* c) { return only.empty() || only == c; };
  const std::pair<const char*, void (*)()> runs[] = {
      {"1", criterion1}, {"2", criterion2}, {"3", criterion3}, {"4", criterion4}, {"5", criterion5}};
  for (const auto& [id, fn] : runs) {
    if (!want(id)) continue;
    try {
      fn();
    } catch (const std::exception& e) {
      report(std::stoi(id), false, std::string("aborted: ") + e.what());
    }
  }
  if (want("6")) criterion6(1, argv);
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
