#include <doctest.h>

#include <cmath>

#include "ctdg/error.hpp"
#include "ctdg/limiter.hpp"
#include "ctdg/remap.hpp"
#include "helpers.hpp"

using namespace ctdg;
using testing::random_field;

namespace {

struct Spaces {
  std::shared_ptr<const Mesh> mesh = testing::slice_mesh(6, 6);
  SpacePtr r0 = make_space(mesh, SpaceSpec::rho0());
  SpacePtr r1 = make_space(mesh, SpaceSpec::rho1());
};

// Fields dipping below zero in a few cells, with positive cell means.
Field dipping_field(const SpacePtr& V, std::mt19937& rng)
{
  std::uniform_real_distribution<double> u(0.0, 0.1);
  Field m(V);
  for (int c = 0; c < V->mesh().num_cells(); ++c) {
    const auto d = V->cell_dofs(c);
    for (int k = 0; k < 4; ++k) m[d[k]] = u(rng);
    if (c % 3 == 0) m[d[c % 4]] = -0.5 * u(rng);
  }
  return m;
}

double vertex_min(const Field& m, int c)
{
  const auto v = m.evaluate_at_vertices(c);
  return *std::min_element(v.begin(), v.end());
}

} // namespace

TEST_CASE("mean mixing ratio")
{
  Spaces s;
  std::mt19937 rng(31);
  const Field rho = random_field(s.r1, 0.5, 1.5, rng);
  const Field c = mean_mixing_ratio(Field(s.r1, 0.03), rho, s.r0);
  CHECK(std::abs(c.max() - 0.03) < 1e-15);
  CHECK(std::abs(c.min() - 0.03) < 1e-15);

  const Field m = random_field(s.r1, -0.05, 0.1, rng);
  const Field plain = mean_mixing_ratio(m, Field(s.r1, 1.0), s.r0);
  const Field avg = galerkin_project(m, s.r0);
  CHECK(testing::max_abs_diff(plain.coeffs(), avg.coeffs()) <= 1e-15);

  const Field mbar = mean_mixing_ratio(m, rho, s.r0);
  const auto before = cell_integrals_of_product(rho, m);
  const auto after = cell_integrals_of_product(rho, inject(mbar, s.r1));
  for (std::size_t k = 0; k < before.size(); ++k) CHECK(std::abs(after[k] - before[k]) <= 1e-13 * std::abs(before[k]) + 1e-20);
}

TEST_CASE("blending coefficient")
{
  const double v1[] = {-0.1, 0.3, 0.3, 0.3};
  CHECK(blending_coefficient(v1, 0.1) == doctest::Approx(0.5).epsilon(1e-15));
  const double v2[] = {0.0, 0.3, 0.2, 0.3};
  CHECK(blending_coefficient(v2, 0.1) == 0.0);
  const double v3[] = {-0.07, 0.2, 0.1, 0.1};
  CHECK(blending_coefficient(v3, 0.07) == doctest::Approx(0.5).epsilon(1e-15));
  bool unfixable = false;
  const double v4[] = {-0.2, 0.1, 0.0, 0.0};
  const double lam = blending_coefficient(v4, -0.01, &unfixable);
  CHECK(unfixable);
  CHECK(lam >= 0.0);
  CHECK(lam <= 1.0);
}

TEST_CASE("blend")
{
  Spaces s;
  std::mt19937 rng(32);
  const Field m = random_field(s.r1, -0.1, 0.1, rng);
  const Field mbar = random_field(s.r0, 0.0, 0.1, rng);
  CHECK(blend(m, mbar, Field(s.r0, 0.0)).coeffs() == m.coeffs());
  const Field full = blend(m, mbar, Field(s.r0, 1.0));
  for (int c = 0; c < s.mesh->num_cells(); ++c)
    for (int k : s.r1->cell_dofs(c)) CHECK(full[k] == mbar[c]);

  // the worked cell: vertex min lands on zero
  Field one(s.r1, 0.3);
  one[s.r1->cell_dofs(0)[0]] = -0.1;
  Field lam(s.r0, 0.0), mb(s.r0, 0.3);
  mb[0] = 0.1;
  lam[0] = 0.5;
  CHECK(std::abs(vertex_min(blend(one, mb, lam), 0)) <= 1e-16);
}

TEST_CASE("MMR limiter properties")
{
  Spaces s;
  std::mt19937 rng(33);
  const Field rho = random_field(s.r1, 0.5, 1.5, rng);

  const Field pos = random_field(s.r1, 0.0, 0.1, rng);
  CHECK(apply_mmr_limiter(pos, rho).coeffs() == pos.coeffs());

  const Field c = apply_mmr_limiter(Field(s.r1, 0.02), rho);
  CHECK(c.coeffs() == Field(s.r1, 0.02).coeffs());

  for (int trial = 0; trial < 20; ++trial) {
    const Field m = dipping_field(s.r1, rng);
    LimiterStats stats;
    const Field lim = apply_mmr_limiter(m, rho, &stats);
    CHECK(stats.limited_cells > 0);
    CHECK(stats.unfixable_cells == 0);
    for (int k = 0; k < s.mesh->num_cells(); ++k) CHECK(vertex_min(lim, k) >= -1e-14);

    const auto before = cell_integrals_of_product(rho, m);
    const auto after = cell_integrals_of_product(rho, lim);
    for (std::size_t k = 0; k < before.size(); ++k) CHECK(std::abs(after[k] - before[k]) <= 1e-12 * std::abs(before[k]) + 1e-18);
    const double g0 = integrate_product(rho, m), g1 = integrate_product(rho, lim);
    CHECK(std::abs(g1 - g0) <= 1e-12 * std::abs(g0));

    // idempotent once non-negative (blended vertices can sit a rounding error below 0)
    Field clean = lim;
    for (auto& v : clean.coeffs()) v = std::max(v, 0.0);
    CHECK(apply_mmr_limiter(clean, rho).coeffs() == clean.coeffs());
    CHECK(testing::max_abs_diff(apply_mmr_limiter(lim, rho).coeffs(), lim.coeffs()) <= 1e-15);
  }

  // a cell with negative mass is reported and left alone
  Field bad = random_field(s.r1, 0.0, 0.1, rng);
  for (int k : s.r1->cell_dofs(4)) bad[k] = -0.01;
  LimiterStats stats;
  const Field out = apply_mmr_limiter(bad, rho, &stats);
  CHECK(stats.unfixable_cells == 1);
  for (int k : s.r1->cell_dofs(4)) CHECK(out[k] == -0.01);
}

TEST_CASE("MMR: argmin vertex is exactly zero after blending")
{
  Spaces s;
  std::mt19937 rng(34);
  const Field rho = random_field(s.r1, 0.5, 1.5, rng);
  const Field m = dipping_field(s.r1, rng);
  const auto mbar = mean_mixing_ratio_values(m, rho);
  const Field lim = apply_mmr_limiter(m, rho);
  for (int c = 0; c < s.mesh->num_cells(); ++c) {
    const auto v = m.evaluate_at_vertices(c);
    const double lam = blending_coefficient(v, mbar[c]);
    if (lam > 0.0 && lam < 1.0) CHECK(std::abs(vertex_min(lim, c)) <= 1e-14);
  }
}

TEST_CASE("baseline vertex limiter")
{
  Spaces s;
  std::mt19937 rng(35);
  const Field pos = random_field(s.r1, 0.0, 1.0, rng);
  CHECK(positive_definite_vertex_limiter(pos).coeffs() == pos.coeffs());

  // 1D-like cell: {-1, 3} along x, mean 1, scale 1/2 gives {0, 2}
  Field m(s.r1, 1.0);
  const auto d = s.r1->cell_dofs(0);
  for (int k = 0; k < 4; ++k) m[d[k]] = s.r1->node_reference(k)[0] < 0 ? -1.0 : 3.0;
  const Field lim = positive_definite_vertex_limiter(m);
  for (int k = 0; k < 4; ++k) CHECK(lim[d[k]] == doctest::Approx(s.r1->node_reference(k)[0] < 0 ? 0.0 : 2.0));

  for (int trial = 0; trial < 20; ++trial) {
    const Field f = dipping_field(s.r1, rng);
    const Field g = positive_definite_vertex_limiter(f);
    const auto a = testing::oracle_cell_products(f, nullptr), b = testing::oracle_cell_products(g, nullptr);
    for (int c = 0; c < s.mesh->num_cells(); ++c) {
      // cells with a negative mean are clipped, not rescaled
      if (a[c] >= 0.0) CHECK(std::abs(a[c] - b[c]) / s.mesh->cell_areas()[c] <= 1e-14);
      CHECK(vertex_min(g, c) >= -1e-15);
    }
  }

  Field neg(s.r1, 0.1);
  for (int k : s.r1->cell_dofs(2)) neg[k] = -0.2;
  LimiterStats stats;
  const Field out = positive_definite_vertex_limiter(neg, &stats);
  CHECK(stats.unfixable_cells == 1);
  for (int k : s.r1->cell_dofs(2)) CHECK(out[k] == 0.0);
}

TEST_CASE("limiters need DQ1 x DQ1")
{
  Spaces s;
  const auto t = make_space(s.mesh, SpaceSpec::theta_hat());
  CHECK_THROWS_AS(apply_mmr_limiter(Field(t, 0.0), Field(t, 1.0)), Error);
  CHECK_THROWS_AS(positive_definite_vertex_limiter(Field(t, 0.0)), Error);
}
