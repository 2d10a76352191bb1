#pragma once

#include <span>
#include <vector>

#include "ctdg/space.hpp"

namespace ctdg {

/// Cell means of rho*m: int psi rho_X = int psi rho m for psi in DQ0 x DQ0.
Field tracer_density_cellwise(const Field& rho, const Field& m, const SpacePtr& dq0);

/// Global tracer density int rho * sum_i w_i m_i.
double tracer_mass(const Field& rho, const std::vector<Field>& ms, const std::vector<double>& weights);

/// |now - initial| / |initial|.
double relative_change(double now, double initial);

/// sqrt(int (m - ref)^2); both fields on the same space.
double l2_error(const Field& m, const Field& ref);

/// Least-squares slope of log(err) against log(dx).
double convergence_slope(std::span<const double> dx, std::span<const double> err);

} // namespace ctdg
