#include "ctdg/velocity.hpp"

#include <cmath>
#include <numbers>

namespace ctdg {

namespace {
constexpr double pi = std::numbers::pi;

Vec3 combine(double lon, double lat, double u, double v)
{
  const auto e = sphere_basis(lon, lat);
  return {u * e[0][0] + v * e[1][0], u * e[0][1] + v * e[1][1], u * e[0][2] + v * e[1][2]};
}
} // namespace

std::array<Vec3, 2> sphere_basis(double lon, double lat)
{
  const double sl = std::sin(lon), cl = std::cos(lon);
  const double sp = std::sin(lat), cp = std::cos(lat);
  return {Vec3{-sl, cl, 0.0}, Vec3{-sp * cl, -sp * sl, cp}};
}

DivergentSphereFlow::DivergentSphereFlow(double radius, double tau_) : a(radius), tau(tau_), k(5.0 * radius / tau_) {}

std::array<double, 2> DivergentSphereFlow::components(double lon, double lat, double t) const
{
  const double lp = lon - 2.0 * pi * a * t / tau;
  const double ct = std::cos(pi * t / tau);
  const double cp = std::cos(lat);
  const double s = std::sin(0.5 * lp);
  const double u = 2.0 * pi * a * cp / tau - k * s * s * std::sin(2.0 * lat) * cp * cp * ct;
  const double v = 0.5 * k * std::sin(lp) * cp * cp * cp * ct;
  return {u, v};
}

Vec3 DivergentSphereFlow::velocity(const Vec3& x, double t) const
{
  const auto ll = lon_lat(x);
  const auto uv = components(ll[0], ll[1], t);
  return combine(ll[0], ll[1], uv[0], uv[1]);
}

double DivergentSphereFlow::divergence(const Vec3& x, double t) const
{
  const auto ll = lon_lat(x);
  const double lp = ll[0] - 2.0 * pi * a * t / tau;
  const double cp = std::cos(ll[1]);
  return -3.0 * k * std::sin(lp) * std::sin(ll[1]) * cp * cp * std::cos(pi * t / tau) / a;
}

NondivergentSphereFlow::NondivergentSphereFlow(double radius, double tau_) : a(radius), tau(tau_), k(10.0 * radius / tau_)
{
}

std::array<double, 2> NondivergentSphereFlow::components(double lon, double lat, double t) const
{
  const double lp = lon - 2.0 * pi * t / tau;
  const double ct = std::cos(pi * t / tau);
  const double s = std::sin(lp);
  const double u = k * s * s * std::sin(2.0 * lat) * ct + 2.0 * pi * a * std::cos(lat) / tau;
  const double v = k * std::sin(2.0 * lp) * std::cos(lat) * ct;
  return {u, v};
}

Vec3 NondivergentSphereFlow::velocity(const Vec3& x, double t) const
{
  const auto ll = lon_lat(x);
  const auto uv = components(ll[0], ll[1], t);
  return combine(ll[0], ll[1], uv[0], uv[1]);
}

double NondivergentSphereFlow::divergence(const Vec3&, double) const { return 0.0; }

SliceDeformationFlow::SliceDeformationFlow(double lx_, double hz_, double tau_)
    : lx(lx_), hz(hz_), tau(tau_), u0(lx_ / tau_), w0(lx_ / tau_ / 10.0)
{
}

Vec3 SliceDeformationFlow::velocity(const Vec3& x, double t) const
{
  const double xp = x[0] - u0 * t;
  const double ct = std::cos(pi * t / tau);
  const double u = u0 - w0 * pi * lx / hz * ct * std::cos(2.0 * pi * xp / lx) * std::cos(pi * x[1] / hz);
  const double w = 2.0 * pi * w0 * ct * std::sin(2.0 * pi * xp / lx) * std::sin(pi * x[1] / hz);
  return {u, w, 0.0};
}

double SliceDeformationFlow::divergence(const Vec3& x, double t) const
{
  const double xp = x[0] - u0 * t;
  return 4.0 * pi * pi * w0 / hz * std::cos(pi * t / tau) * std::sin(2.0 * pi * xp / lx) * std::cos(pi * x[1] / hz);
}

} // namespace ctdg
