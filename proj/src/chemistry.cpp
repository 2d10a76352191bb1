#include "ctdg/chemistry.hpp"

#include <algorithm>
#include <cmath>

#include "ctdg/error.hpp"

namespace ctdg {

std::array<double, 2> reaction_rates(double lon, double lat, const ChemistryParams& p)
{
  const double c = std::sin(lat) * std::sin(p.lat_c) + std::cos(lat) * std::cos(p.lat_c) * std::cos(lon - p.lon_c);
  return {std::max(0.0, c), 1.0};
}

std::array<double, 2> terminator_equilibrium(double k1, double k2, double xt)
{
  require(k2 > 0.0 && xt >= 0.0, "terminator_equilibrium: need k2 > 0 and X_T >= 0");
  const double r = k1 / (4.0 * k2);
  const double d = std::sqrt(r * r + 2.0 * r * xt);
  // d - r without the cancellation when r >> X_T
  const double x = d + r > 0.0 ? 2.0 * r * xt / (d + r) : 0.0;
  return {x, 0.5 * (xt - x)};
}

double chemistry_tendency(double x, double x2, double k1, double k2, double dt)
{
  require(dt > 0.0, "chemistry_tendency: dt must be positive");
  // f = k1 (X2 - dt f) - k2 (X + 2 dt f)^2  =>  A f^2 + B f + C = 0
  const double a = 4.0 * k2 * dt * dt;
  const double b = 1.0 + k1 * dt + 4.0 * k2 * x * dt;
  const double c = k2 * x * x - k1 * x2;
  const double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) throw Error("chemistry_tendency: no real root (X = " + std::to_string(x) + ")");
  double f = -2.0 * c / (b + std::sqrt(disc));
  if (f < 0.0)
    f = std::max(f, -x / dt);
  else
    f = std::min(f, 2.0 * x2 / dt);
  return f;
}

void apply_chemistry_step(Field& x, Field& x2, const Field& k1, const Field& k2, double dt)
{
  require(x.space_ptr() == x2.space_ptr() && x.space_ptr() == k1.space_ptr() && x.space_ptr() == k2.space_ptr(),
          "apply_chemistry_step: fields must share a space");
  for (int d = 0; d < x.size(); ++d) {
    const double f = chemistry_tendency(x[d], x2[d], k1[d], k2[d], dt);
    x[d] += 2.0 * dt * f;
    x2[d] -= dt * f;
  }
}

} // namespace ctdg
