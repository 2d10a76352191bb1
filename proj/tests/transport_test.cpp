#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "ctdg/cases.hpp"
#include "ctdg/error.hpp"
#include "ctdg/transport.hpp"
#include "helpers.hpp"

using namespace ctdg;
using testing::random_field;

namespace {

// Periodic 1D upwind DG with P1 nodes at the cell ends, written out by hand.
std::vector<std::array<double, 2>> dg1d_tendency(const std::vector<std::array<double, 2>>& q, double c, double h)
{
  const int n = static_cast<int>(q.size());
  std::vector<std::array<double, 2>> out(n);
  for (int j = 0; j < n; ++j) {
    const auto& left = q[(j - 1 + n) % n];
    const auto& right = q[(j + 1) % n];
    const double mean = 0.5 * (q[j][0] + q[j][1]);
    const double in_left = c >= 0 ? left[1] : q[j][0];
    const double in_right = c >= 0 ? q[j][1] : right[0];
    const double rl = c * (-mean + in_left);
    const double rr = c * (mean - in_right);
    // inverse of h/6 [[2,1],[1,2]]
    out[j][0] = (2.0 * rl - rr) * 2.0 / h;
    out[j][1] = (2.0 * rr - rl) * 2.0 / h;
  }
  return out;
}

State rk_rhs(const DgTransport& tr, const State& s, double t)
{
  return {tr.conservative_rhs(Field(tr.space_ptr(), s[0]), t)};
}

} // namespace

TEST_CASE("upwind trace")
{
  CHECK(upwind_trace(1.0, 2.0, 0.5) == 1.0);
  CHECK(upwind_trace(1.0, 2.0, -0.5) == 2.0);
  CHECK(upwind_trace(3.0, 3.0, 0.0) == 3.0);
  CHECK(upwind_trace(3.0, 3.0, -7.0) == 3.0);
}

TEST_CASE("1D oracle: x-only field in a uniform horizontal flow")
{
  const int n = 9;
  const auto mesh = testing::slice_mesh(n, 3);
  const auto V = make_space(mesh, SpaceSpec::rho1());
  const double h = 2000.0 / n;
  std::mt19937 rng(21);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<std::array<double, 2>> q1(n);
  for (auto& v : q1) v = {u(rng), u(rng)};

  Field q(V);
  for (int c = 0; c < mesh->num_cells(); ++c) {
    const int i = mesh->cell_ij(c)[0];
    for (int k = 0; k < 4; ++k) q[V->cell_dofs(c)[k]] = q1[i][V->node_reference(k)[0] < 0 ? 0 : 1];
  }
  for (double speed : {3.0, -2.0}) {
    DgTransport tr(V, std::make_shared<UniformFlow>(Vec3{speed, 0.0, 0.0}));
    const auto oracle = dg1d_tendency(q1, speed, h);
    const Field cons(V, tr.conservative_rhs(q, 0.0));
    const Field adv(V, tr.advective_rhs(q, 0.0));
    double scale = 0.0;
    for (const auto& o : oracle) scale = std::max({scale, std::abs(o[0]), std::abs(o[1])});
    for (int c = 0; c < mesh->num_cells(); ++c) {
      const int i = mesh->cell_ij(c)[0];
      for (int k = 0; k < 4; ++k) {
        const auto ref = V->node_reference(k);
        const double expect = oracle[i][ref[0] < 0 ? 0 : 1];
        REQUIRE(std::abs(cons.evaluate(c, ref[0], ref[1]) - expect) <= 1e-12 * scale);
        REQUIRE(std::abs(adv.evaluate(c, ref[0], ref[1]) - expect) <= 1e-12 * scale);
      }
    }
  }
}

TEST_CASE("conservative tendency integrates to zero")
{
  std::mt19937 rng(22);
  {
    const auto mesh = testing::slice_mesh(8, 8);
    const auto V = make_space(mesh, SpaceSpec::theta_hat());
    DgTransport tr(V, velocity_case(CaseId::A2Convergence));
    const Field q = random_field(V, 0.5, 1.5, rng);
    const auto r = tr.conservative_residual(q, 300.0);
    double sum = 0.0, scale = 0.0;
    for (double v : r) {
      sum += v;
      scale += std::abs(v);
    }
    CHECK(std::abs(sum) <= 1e-13 * scale);
  }
  {
    const auto mesh = testing::sphere_mesh(4);
    const auto V = make_space(mesh, SpaceSpec::rho1());
    DgTransport tr(V, velocity_case(CaseId::A3Slotted));
    const Field q = random_field(V, 0.5, 1.5, rng);
    const auto r = tr.conservative_residual(q, 1e5);
    double sum = 0.0, scale = 0.0;
    for (double v : r) {
      sum += v;
      scale += std::abs(v);
    }
    CHECK(std::abs(sum) <= 1e-13 * scale);
  }
}

TEST_CASE("constants under divergence-free flow")
{
  // Uniform horizontal flow is divergence free in the discrete sense too
  // (a vertical component would cross the rigid lid).
  const auto mesh = testing::slice_mesh(6, 6);
  const auto V = make_space(mesh, SpaceSpec::rho1());
  DgTransport tr(V, std::make_shared<UniformFlow>(Vec3{4.0, 0.0, 0.0}));
  const Field c(V, 0.02);
  CHECK(testing::max_abs(tr.conservative_rhs(c, 0.0)) <= 1e-11 * 0.02 * 4.0 / 2000.0);
  CHECK(testing::max_abs(tr.advective_rhs(c, 0.0)) <= 1e-13);

  // Same field, both forms.
  std::mt19937 rng(23);
  const Field m = random_field(V, 0.0, 1.0, rng);
  const auto a = tr.conservative_rhs(m, 0.0), b = tr.advective_rhs(m, 0.0);
  CHECK(testing::max_abs_diff(a, b) <= 1e-11 * testing::max_abs(a));
}

TEST_CASE("constant on the sphere: analytic non-divergent flow, discrete divergence shrinks with h")
{
  // The velocity is sampled pointwise, so the discrete divergence is only
  // small, not zero.  Check it is second order.
  double prev = 0.0;
  for (int ne : {4, 8, 16}) {
    const auto mesh = testing::sphere_mesh(ne);
    const auto V = make_space(mesh, SpaceSpec::rho1());
    DgTransport tr(V, velocity_case(CaseId::A4Terminator));
    const double d = testing::max_abs(tr.conservative_rhs(Field(V, 0.02), 3e5));
    if (prev > 0.0) CHECK(prev / d > 3.0);
    prev = d;
    // the advective form keeps the constant exactly
    CHECK(testing::max_abs(tr.advective_rhs(Field(V, 0.02), 3e5)) <= 1e-13 * 0.02);
  }
}

TEST_CASE("rhs operators are linear")
{
  const auto mesh = testing::slice_mesh(5, 5);
  const auto V = make_space(mesh, SpaceSpec::theta_hat());
  DgTransport tr(V, velocity_case(CaseId::A2Convergence));
  std::mt19937 rng(24);
  const Field a = random_field(V, -1.0, 1.0, rng), b = random_field(V, -1.0, 1.0, rng);
  Field comb = a;
  comb.scale(1.7).axpy(-0.4, b);
  for (int form = 0; form < 2; ++form) {
    const auto f = [&](const Field& x) { return form == 0 ? tr.conservative_rhs(x, 50.0) : tr.advective_rhs(x, 50.0); };
    const auto ra = f(a), rb = f(b), rc = f(comb);
    std::vector<double> expect(ra.size());
    for (std::size_t i = 0; i < ra.size(); ++i) expect[i] = 1.7 * ra[i] - 0.4 * rb[i];
    CHECK(testing::max_abs_diff(rc, expect) <= 1e-12 * testing::max_abs(expect));
  }
}

TEST_CASE("SSPRK3")
{
  const RhsFunction decay = [](const State& s, double) { return State{{-s[0][0]}}; };
  const State out = ssprk3_step(State{{1.0}}, decay, 0.0, 0.1);
  CHECK(std::abs(out[0][0] - 0.9048333) <= 1e-7);
  CHECK(out[0][0] == doctest::Approx(1.0 - 0.1 + 0.005 - 0.1 * 0.1 * 0.1 / 6.0).epsilon(1e-15));

  const RhsFunction zero = [](const State& s, double) { return State{std::vector<double>(s[0].size(), 0.0)}; };
  const State s0{{1.0, -2.0, 3.5}};
  CHECK(testing::max_abs_diff(ssprk3_step(s0, zero, 0.0, 0.5)[0], s0[0]) <= 1e-15);

  std::mt19937 rng(25);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::Matrix<double, 5, 5> L;
  Eigen::Matrix<double, 5, 1> x0;
  for (int i = 0; i < 5; ++i) {
    x0(i) = u(rng);
    for (int j = 0; j < 5; ++j) L(i, j) = u(rng);
  }
  const double dt = 0.3;
  const RhsFunction lin = [&L](const State& s, double) {
    const Eigen::Map<const Eigen::Matrix<double, 5, 1>> x(s[0].data());
    const Eigen::Matrix<double, 5, 1> y = L * x;
    return State{std::vector<double>(y.data(), y.data() + 5)};
  };
  const State got = ssprk3_step(State{std::vector<double>(x0.data(), x0.data() + 5)}, lin, 0.0, dt);
  const Eigen::Matrix<double, 5, 5> A = dt * L;
  const Eigen::Matrix<double, 5, 5> P = Eigen::Matrix<double, 5, 5>::Identity() + A + A * A / 2.0 + A * A * A / 6.0;
  const Eigen::Matrix<double, 5, 1> expect = P * x0;
  for (int i = 0; i < 5; ++i) CHECK(std::abs(got[0][i] - expect(i)) <= 1e-13);

  // stage times and the hook
  std::vector<double> times;
  std::vector<int> stages;
  const RhsFunction record = [&times](const State& s, double t) {
    times.push_back(t);
    return State{{0.0 * s[0][0]}};
  };
  ssprk3_step(State{{1.0}}, record, 10.0, 2.0, [&stages](State&, int k) { stages.push_back(k); });
  CHECK(times == std::vector<double>{10.0, 12.0, 11.0});
  CHECK(stages.size() == 3);

  const RhsFunction blowup = [](const State&, double) { return State{{std::nan("")}}; };
  CHECK_THROWS_AS(ssprk3_step(State{{1.0}}, blowup, 0.0, 1.0), Error);
}

TEST_CASE("identification of the mixing ratio")
{
  const auto mesh = testing::slice_mesh(4, 4);
  const auto V = make_space(mesh, SpaceSpec::rho1());
  const Field m = identify_mixing_ratio(Field(V, 0.04), Field(V, 2.0));
  CHECK(std::abs(m.max() - 0.02) < 1e-16);
  CHECK(std::abs(m.min() - 0.02) < 1e-16);

  std::mt19937 rng(26);
  const Field rho = random_field(V, 0.5, 1.5, rng);
  const Field one = identify_mixing_ratio(rho, rho);
  CHECK(std::abs(one.max() - 1.0) < 1e-14);
  CHECK(std::abs(one.min() - 1.0) < 1e-14);

  Field holed = rho;
  holed[5] = 0.0;
  CHECK_THROWS_AS(identify_mixing_ratio(rho, holed), Error);
}

TEST_CASE("identification solves the weak product equation (Newton residual)")
{
  // The nonlinear form: find m with F(m)_i = int phi_i (rho m - q) = 0.  It is
  // linear in m, so one Newton step from anything lands on the root; the
  // residual at the returned m must vanish.
  for (const auto& mesh : {testing::slice_mesh(6, 6), testing::sphere_mesh(4)}) {
    const auto V = make_space(mesh, SpaceSpec::rho1());
    std::mt19937 rng(27);
    const Field rho = random_field(V, 0.5, 1.5, rng);
    const Field q = random_field(V, 0.0, 0.1, rng);
    const Field m = identify_mixing_ratio(q, rho);
    const auto rq = q.at_quadrature(), rr = rho.at_quadrature(), mq = m.at_quadrature();
    std::vector<double> f(rq.size());
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = rr[i] * mq[i] - rq[i];
    const auto residual = V->assemble_load(f);
    const auto load = V->assemble_load(rq);
    CHECK(testing::max_abs(residual) <= 1e-12 * testing::max_abs(load));

    // where rho is cellwise constant the identification is nodal division
    const Field rho_c = interpolate(V, [](const Vec3& x) { return 1.0 + 0.1 * std::abs(std::sin(x[0])); });
    Field rho_cell(V);
    for (int c = 0; c < mesh->num_cells(); ++c)
      for (int k : V->cell_dofs(c)) rho_cell[k] = rho_c[V->cell_dofs(c)[0]];
    const Field md = identify_mixing_ratio(q, rho_cell);
    for (int i = 0; i < V->ndof(); ++i) CHECK(md[i] == doctest::Approx(q[i] / rho_cell[i]).epsilon(1e-13));
  }
}

TEST_CASE("discrete conservation over many steps")
{
  std::mt19937 rng(28);
  struct Setup {
    std::shared_ptr<const Mesh> mesh;
    SpaceSpec spec;
    CaseId flow;
    double dt;
  };
  const Setup setups[] = {{testing::slice_mesh(10, 10), SpaceSpec::theta_hat(), CaseId::A2Convergence, 10.0},
                          {testing::slice_mesh(10, 10), SpaceSpec::rho1(), CaseId::A2Convergence, 10.0},
                          {testing::sphere_mesh(4), SpaceSpec::rho1(), CaseId::A3Slotted, 2700.0}};
  for (const auto& s : setups) {
    const auto V = make_space(s.mesh, s.spec);
    DgTransport tr(V, velocity_case(s.flow));
    State st{random_field(V, 0.5, 1.5, rng).coeffs()};
    const double m0 = integrate(Field(V, st[0]));
    const RhsFunction rhs = [&tr](const State& x, double t) { return rk_rhs(tr, x, t); };
    for (int n = 0; n < 30; ++n) st = ssprk3_step(st, rhs, n * s.dt, s.dt);
    CHECK(std::abs(integrate(Field(V, st[0])) - m0) <= 1e-12 * std::abs(m0));
  }
}

TEST_CASE("consistency identity: transport rho and rho*c, identify c")
{
  for (const auto& mesh : {testing::slice_mesh(10, 10), testing::sphere_mesh(4)}) {
    const bool sphere = mesh->kind() == MeshKind::CubedSphere;
    const auto V = make_space(mesh, SpaceSpec::rho1());
    DgTransport tr(V, velocity_case(sphere ? CaseId::A1Consistency : CaseId::A2Consistency));
    const Field rho = interpolate(V, initial_density(sphere ? CaseId::A1Consistency : CaseId::A2Consistency));
    Field q = rho;
    q.scale(0.02);
    const RhsFunction rhs = [&tr](const State& x, double t) {
      return State{tr.conservative_rhs(Field(tr.space_ptr(), x[0]), t), tr.conservative_rhs(Field(tr.space_ptr(), x[1]), t)};
    };
    State st{rho.coeffs(), q.coeffs()};
    const double dt = sphere ? 2700.0 : 10.0;
    for (int n = 0; n < 20; ++n) st = ssprk3_step(st, rhs, n * dt, dt);
    const Field m = identify_mixing_ratio(Field(V, st[1]), Field(V, st[0]));
    CHECK(std::abs(m.max() - 0.02) <= 1e-11);
    CHECK(std::abs(m.min() - 0.02) <= 1e-11);
  }
}

TEST_CASE("CFL sanity at N = 100, dt = 2 s")
{
  const auto mesh = testing::slice_mesh(100, 100);
  const auto V = make_space(mesh, SpaceSpec::rho1());
  DgTransport tr(V, velocity_case(CaseId::A2Convergence));
  State st{interpolate(V, initial_density(CaseId::A2Convergence)).coeffs()};
  const RhsFunction rhs = [&tr](const State& x, double t) { return rk_rhs(tr, x, t); };
  for (int n = 0; n < 100; ++n) REQUIRE_NOTHROW(st = ssprk3_step(st, rhs, 2.0 * n, 2.0));
  CHECK(Field(V, st[0]).all_finite());
}

TEST_CASE("transport needs a fully discontinuous space")
{
  const auto mesh = testing::slice_mesh(3, 3);
  CHECK_THROWS_AS(DgTransport(make_space(mesh, SpaceSpec::theta1()), velocity_case(CaseId::A2Convergence)), Error);
}
