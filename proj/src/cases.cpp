#include "ctdg/cases.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ctdg/error.hpp"

namespace ctdg {

namespace {
constexpr double pi = std::numbers::pi;

double great_arc(double lon, double lat, const std::array<double, 2>& c)
{
  const double v = std::sin(lat) * std::sin(c[1]) + std::cos(lat) * std::cos(c[1]) * std::cos(lon - c[0]);
  return std::acos(std::clamp(v, -1.0, 1.0));
}
} // namespace

const CaseConstants& case_constants()
{
  static const CaseConstants k;
  return k;
}

std::string case_name(CaseId id)
{
  switch (id) {
  case CaseId::A1Convergence: return "A1-convergence";
  case CaseId::A1Consistency: return "A1-consistency";
  case CaseId::A2Convergence: return "A2-convergence";
  case CaseId::A2Consistency: return "A2-consistency";
  case CaseId::A3Slotted: return "A3-slotted";
  case CaseId::A4Terminator: return "A4-terminator";
  }
  return "unknown";
}

const std::vector<CaseId>& all_cases()
{
  static const std::vector<CaseId> v{CaseId::A1Convergence, CaseId::A1Consistency, CaseId::A2Convergence,
                                     CaseId::A2Consistency, CaseId::A3Slotted, CaseId::A4Terminator};
  return v;
}

CaseId parse_case(const std::string& name)
{
  for (CaseId id : all_cases())
    if (case_name(id) == name) return id;
  throw Error("unknown case '" + name + "'");
}

bool case_on_sphere(CaseId id) { return id != CaseId::A2Convergence && id != CaseId::A2Consistency; }

double case_period(CaseId id)
{
  return case_on_sphere(id) ? case_constants().tau_sphere : case_constants().tau_slice;
}

int case_tracer_count(CaseId id) { return id == CaseId::A4Terminator ? 2 : 1; }

std::vector<double> case_tracer_weights(CaseId id)
{
  return id == CaseId::A4Terminator ? std::vector<double>{1.0, 2.0} : std::vector<double>{1.0};
}

double case_default_dt(CaseId id, int resolution)
{
  require(resolution > 0, "case_default_dt: resolution must be positive");
  const CaseConstants& k = case_constants();
  if (case_on_sphere(id)) return k.dt_sphere_ref * k.ne_ref / resolution;
  // 5 s at N = 40, held at fixed Courant number.
  return 200.0 / resolution;
}

VelocityPtr velocity_case(CaseId id)
{
  const CaseConstants& k = case_constants();
  switch (id) {
  case CaseId::A1Convergence:
  case CaseId::A1Consistency:
  case CaseId::A3Slotted: return std::make_shared<DivergentSphereFlow>(k.radius, k.tau_sphere);
  case CaseId::A4Terminator: return std::make_shared<NondivergentSphereFlow>(k.radius, k.tau_sphere);
  case CaseId::A2Convergence:
  case CaseId::A2Consistency: return std::make_shared<SliceDeformationFlow>(k.lx, k.hz, k.tau_slice);
  }
  throw Error("velocity_case: bad case");
}

double sphere_gaussians(const Vec3& x, double gmax)
{
  const CaseConstants& k = case_constants();
  const double r = norm(x);
  double total = 0.0;
  for (const auto& c : {k.centre1, k.centre2}) {
    const Vec3 xc{std::cos(c[1]) * std::cos(c[0]), std::cos(c[1]) * std::sin(c[0]), std::sin(c[1])};
    double d2 = 0.0;
    for (int i = 0; i < 3; ++i) d2 += (x[i] / r - xc[i]) * (x[i] / r - xc[i]);
    total += gmax * std::exp(-k.b0 * d2);
  }
  return total;
}

double slice_gaussians(const Vec3& x, double f0)
{
  const CaseConstants& k = case_constants();
  double total = 0.0;
  for (const auto& c : {k.slice_centre1, k.slice_centre2}) {
    const double dx = std::abs(x[0] - c[0]);
    const double lx = std::min(dx, k.lx - dx);
    const double l2 = lx * lx + (x[1] - c[1]) * (x[1] - c[1]);
    total += f0 * std::exp(-l2 / (k.lc * k.lc));
  }
  return total;
}

double slotted_cylinders(const Vec3& x)
{
  const CaseConstants& k = case_constants();
  const auto ll = lon_lat(x);
  const double lon = ll[0], lat = ll[1];
  const double r1 = great_arc(lon, lat, k.centre1);
  const double r2 = great_arc(lon, lat, k.centre2);
  const double d1 = std::abs(lon - k.centre1[0]);
  const double d2 = std::abs(lon - k.centre2[0]);
  const double w = k.slot_half_width;
  // Conditions exactly as tabulated, including the fourth branch testing
  // against the first centre.
  if (r1 < k.cylinder_radius && d1 > w) return 1.0;
  if (r2 < k.cylinder_radius && d2 > w) return 1.0;
  if (r1 < k.cylinder_radius && d1 <= w && (lat - k.centre1[1]) > -k.slot_offset) return 1.0;
  if (r2 < k.cylinder_radius && d1 <= w && (lat - k.centre1[1]) > k.slot_offset) return 1.0;
  return 0.0;
}

ScalarFunction initial_density(CaseId id)
{
  const CaseConstants& k = case_constants();
  switch (id) {
  case CaseId::A1Convergence:
  case CaseId::A3Slotted: return [&k](const Vec3& x) { return k.rho_b_sphere + 0.5 * std::cos(lon_lat(x)[1]); };
  case CaseId::A1Consistency:
  case CaseId::A4Terminator:
    return [&k](const Vec3& x) { return k.rho_b_sphere + sphere_gaussians(x, k.gmax_consistency); };
  case CaseId::A2Convergence:
    return [&k](const Vec3& x) { return k.rho_b_slice_convergence + (k.rho_t_slice - k.rho_b_slice_convergence) * x[1] / k.hz; };
  case CaseId::A2Consistency:
    return [&k](const Vec3& x) { return k.rho_b_slice_consistency + slice_gaussians(x, k.f0_consistency); };
  }
  throw Error("initial_density: bad case");
}

std::vector<ScalarFunction> initial_mixing_ratios(CaseId id)
{
  const CaseConstants& k = case_constants();
  switch (id) {
  case CaseId::A1Convergence: return {[&k](const Vec3& x) { return k.m0 + sphere_gaussians(x, k.gmax_convergence); }};
  case CaseId::A1Consistency:
  case CaseId::A2Consistency: return {[&k](const Vec3&) { return k.m0; }};
  case CaseId::A2Convergence: return {[&k](const Vec3& x) { return k.m0 + slice_gaussians(x, k.f0_convergence); }};
  case CaseId::A3Slotted: return {[](const Vec3& x) { return slotted_cylinders(x); }};
  case CaseId::A4Terminator: {
    auto split = [&k](const Vec3& x, int which) {
      const auto ll = lon_lat(x);
      const auto kk = reaction_rates(ll[0], ll[1], k.chemistry);
      return terminator_equilibrium(kk[0], kk[1], k.chemistry.xt0)[which];
    };
    return {[split](const Vec3& x) { return split(x, 0); }, [split](const Vec3& x) { return split(x, 1); }};
  }
  }
  throw Error("initial_mixing_ratios: bad case");
}

} // namespace ctdg
