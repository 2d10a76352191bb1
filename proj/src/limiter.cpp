#include "ctdg/limiter.hpp"

#include <algorithm>
#include <cmath>

#include "ctdg/error.hpp"
#include "ctdg/quadrature.hpp"
#include "ctdg/remap.hpp"

namespace ctdg {

namespace {

void require_order1(const FunctionSpace& V, const char* op)
{
  require(V.fully_discontinuous() && V.spec().horizontal.order == 1 && V.spec().vertical.order == 1,
          std::string(op) + ": needs a DQ1 x DQ1 field, got " + V.spec().name());
}

} // namespace

std::vector<double> mean_mixing_ratio_values(const Field& m, const Field& rho)
{
  require(m.space().mesh_ptr() == rho.space().mesh_ptr(), "mean_mixing_ratio: fields live on different meshes");
  const Mesh& mesh = m.space().mesh();
  const double c = global_mean(m);
  const auto mv = m.at_quadrature();
  const auto rv = rho.at_quadrature();
  const int nqp = m.space().nqp();
  std::vector<double> out(mesh.num_cells());
  for (int k = 0; k < mesh.num_cells(); ++k) {
    const auto& w = mesh.cell_quad(k).weights;
    CompensatedSum num, den;
    for (int q = 0; q < nqp; ++q) {
      const std::size_t i = static_cast<std::size_t>(k) * nqp + q;
      num.add(w[q] * rv[i] * (mv[i] - c));
      den.add(w[q] * rv[i]);
    }
    if (!(std::abs(den.value()) > 0.0))
      throw Error("mean_mixing_ratio: cell " + std::to_string(k) + " has zero density integral");
    out[k] = c + num.value() / den.value();
  }
  return out;
}

Field mean_mixing_ratio(const Field& m, const Field& rho, const SpacePtr& dq0)
{
  require(dq0 != nullptr && dq0->spec() == SpaceSpec::rho0(), "mean_mixing_ratio: target must be DQ0 x DQ0");
  return Field(dq0, mean_mixing_ratio_values(m, rho));
}

double blending_coefficient(std::span<const double> vertex_values, double mbar, bool* unfixable)
{
  require(std::isfinite(mbar), "blending_coefficient: mean mixing ratio is not finite");
  const double mmin = *std::min_element(vertex_values.begin(), vertex_values.end());
  if (unfixable) *unfixable = mbar < 0.0;
  if (mmin >= 0.0) return 0.0;
  if (!(mbar > mmin)) return 1.0;
  return std::clamp(-mmin / (mbar - mmin), 0.0, 1.0);
}

Field blend(const Field& m, const Field& mbar, const Field& lambda)
{
  const Mesh& mesh = m.space().mesh();
  require(mbar.size() == mesh.num_cells() && lambda.size() == mesh.num_cells(),
          "blend: mbar and lambda must hold one value per cell");
  require(m.space().fully_discontinuous(), "blend: m must be fully discontinuous");
  Field out = m;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const double l = lambda[c];
    if (l == 0.0) continue;
    for (int d : m.space().cell_dofs(c)) out[d] = (1.0 - l) * m[d] + l * mbar[c];
  }
  return out;
}

Field apply_mmr_limiter(const Field& m, const Field& rho, LimiterStats* stats)
{
  require_order1(m.space(), "apply_mmr_limiter");
  const Mesh& mesh = m.space().mesh();
  if (m.min() >= 0.0) return m;
  const auto mbar = mean_mixing_ratio_values(m, rho);
  Field out = m;
  LimiterStats local;
  std::array<double, 4> v{};
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const auto dofs = m.space().cell_dofs(c);
    for (int a = 0; a < 4; ++a) v[a] = m[dofs[a]];
    bool bad = false;
    const double l = blending_coefficient(v, mbar[c], &bad);
    if (bad) {
      if (*std::min_element(v.begin(), v.end()) < 0.0) ++local.unfixable_cells;
      continue;
    }
    if (l == 0.0) continue;
    ++local.limited_cells;
    for (int a = 0; a < 4; ++a) out[dofs[a]] = (1.0 - l) * v[a] + l * mbar[c];
  }
  if (stats) *stats += local;
  return out;
}

Field positive_definite_vertex_limiter(const Field& m, LimiterStats* stats)
{
  require_order1(m.space(), "positive_definite_vertex_limiter");
  const FunctionSpace& V = m.space();
  const Mesh& mesh = V.mesh();
  const auto& phi = V.basis_at_qp();
  const int nqp = V.nqp();
  Field out = m;
  LimiterStats local;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const auto dofs = V.cell_dofs(c);
    double vmin = m[dofs[0]];
    for (int a = 1; a < 4; ++a) vmin = std::min(vmin, m[dofs[a]]);
    if (vmin >= 0.0) continue;
    const auto& w = mesh.cell_quad(c).weights;
    CompensatedSum num, den;
    for (int q = 0; q < nqp; ++q) {
      double val = 0.0;
      for (int a = 0; a < 4; ++a) val += phi[q * 4 + a] * m[dofs[a]];
      num.add(w[q] * val);
      den.add(w[q]);
    }
    const double mean = num.value() / den.value();
    if (mean < 0.0) {
      ++local.unfixable_cells;
      for (int d : dofs) out[d] = 0.0;
      continue;
    }
    ++local.limited_cells;
    const double theta = std::clamp(mean / (mean - vmin), 0.0, 1.0);
    for (int d : dofs) out[d] = mean + theta * (m[d] - mean);
  }
  if (stats) *stats += local;
  return out;
}

} // namespace ctdg
