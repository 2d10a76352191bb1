#include "ctdg/diagnostics.hpp"

#include <cmath>

#include "ctdg/error.hpp"
#include "ctdg/quadrature.hpp"

namespace ctdg {

Field tracer_density_cellwise(const Field& rho, const Field& m, const SpacePtr& dq0)
{
  require(dq0 != nullptr && dq0->spec() == SpaceSpec::rho0(), "tracer_density_cellwise: target must be DQ0 x DQ0");
  require(rho.space().mesh_ptr() == dq0->mesh_ptr() && m.space().mesh_ptr() == dq0->mesh_ptr(),
          "tracer_density_cellwise: fields live on different meshes");
  const auto cell = cell_integrals_of_product(rho, m);
  const auto& area = dq0->mesh().cell_areas();
  Field out(dq0);
  for (int c = 0; c < dq0->mesh().num_cells(); ++c) out[dq0->cell_dofs(c)[0]] = cell[c] / area[c];
  return out;
}

double tracer_mass(const Field& rho, const std::vector<Field>& ms, const std::vector<double>& weights)
{
  require(ms.size() == weights.size(), "tracer_mass: one weight per mixing ratio");
  CompensatedSum s;
  for (std::size_t i = 0; i < ms.size(); ++i)
    for (double v : cell_integrals_of_product(rho, ms[i])) s.add(weights[i] * v);
  return s.value();
}

double relative_change(double now, double initial)
{
  if (initial == 0.0) return now == 0.0 ? 0.0 : std::abs(now);
  return std::abs(now - initial) / std::abs(initial);
}

double l2_error(const Field& m, const Field& ref)
{
  require(m.space_ptr() == ref.space_ptr(), "l2_error: fields must share a space");
  Field d = m;
  d.axpy(-1.0, ref);
  return std::sqrt(std::max(0.0, integrate_product(d, d)));
}

double convergence_slope(std::span<const double> dx, std::span<const double> err)
{
  require(dx.size() == err.size() && dx.size() >= 2, "convergence_slope: need at least two matching samples");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(dx.size());
  for (std::size_t i = 0; i < dx.size(); ++i) {
    require(dx[i] > 0.0 && err[i] > 0.0, "convergence_slope: samples must be positive");
    const double x = std::log(dx[i]), y = std::log(err[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

} // namespace ctdg
