#pragma once

#include <array>
#include <numbers>

#include "ctdg/space.hpp"

namespace ctdg {

struct ChemistryParams {
  double lon_c = std::numbers::pi / 9.0;
  double lat_c = -std::numbers::pi / 3.0;
  double xt0 = 4e-6;
};

/// (k1, k2) at a longitude/latitude.
std::array<double, 2> reaction_rates(double lon, double lat, const ChemistryParams& p = {});

/// Equilibrium split of X_T into (X, X2).
std::array<double, 2> terminator_equilibrium(double k1, double k2, double xt);

/// Backward-Euler-consistent tendency f with X' = 2f, X2' = -f, followed by the
/// bound that keeps the forward Euler update non-negative.
double chemistry_tendency(double x, double x2, double k1, double k2, double dt);

/// Nodal forward Euler update X += 2 dt f, X2 -= dt f. k1, k2 are nodal values
/// in the same space as X.
void apply_chemistry_step(Field& x, Field& x2, const Field& k1, const Field& k2, double dt);

} // namespace ctdg
