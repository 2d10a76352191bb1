#pragma once

#include <cmath>
#include <memory>
#include <random>

#include "ctdg/mesh.hpp"
#include "ctdg/space.hpp"

namespace testing {

using namespace ctdg;

inline std::shared_ptr<const Mesh> slice_mesh(int nx, int nz, double lx = 2000.0, double hz = 2000.0)
{
  return std::make_shared<const Mesh>(Mesh::slice(nx, nz, lx, hz));
}

inline std::shared_ptr<const Mesh> sphere_mesh(int ne, double radius = 6371220.0)
{
  return std::make_shared<const Mesh>(Mesh::cubed_sphere(ne, radius));
}

inline Field random_field(const SpacePtr& space, double lo, double hi, std::mt19937& rng)
{
  std::uniform_real_distribution<double> u(lo, hi);
  Field f(space);
  for (auto& c : f.coeffs()) c = u(rng);
  return f;
}

// Brute force: per-cell integral of a*b with a finer Gauss rule and pointwise
// basis evaluation (no tabulated values).
inline std::vector<double> oracle_cell_products(const Field& a, const Field* b, int extra = 3)
{
  const Mesh& m = a.space().mesh();
  std::vector<double> out(m.num_cells(), 0.0);
  for (int c = 0; c < m.num_cells(); ++c) {
    const CellQuadrature cq = m.cell_quadrature(c, m.default_nq() + extra);
    long double s = 0.0L;
    for (std::size_t q = 0; q < cq.weights.size(); ++q) {
      double v = a.evaluate(c, cq.xi[q], cq.eta[q]);
      if (b) v *= b->evaluate(c, cq.xi[q], cq.eta[q]);
      s += static_cast<long double>(cq.weights[q]) * v;
    }
    out[c] = static_cast<double>(s);
  }
  return out;
}

inline double oracle_integral(const Field& a, const Field* b = nullptr)
{
  long double s = 0.0L;
  for (double v : oracle_cell_products(a, b)) s += v;
  return static_cast<double>(s);
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b)
{
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

inline double max_abs(const std::vector<double>& a)
{
  double d = 0.0;
  for (double v : a) d = std::max(d, std::abs(v));
  return d;
}

} // namespace testing
