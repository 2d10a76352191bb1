#include "ctdg/transport.hpp"

#include <cmath>
#include <sstream>

#include "ctdg/error.hpp"
#include "ctdg/quadrature.hpp"

namespace ctdg {

DgTransport::DgTransport(SpacePtr space, VelocityPtr velocity) : space_(std::move(space)), velocity_(std::move(velocity))
{
  require(space_ != nullptr && velocity_ != nullptr, "DgTransport: null space or velocity");
  require(space_->fully_discontinuous(), "DgTransport: transport space " + space_->spec().name() +
                                             " is not fully discontinuous");
}

const DgTransport::Samples& DgTransport::samples(double t) const
{
  if (cache_.valid && cache_.t == t) return cache_;
  const Mesh& m = space_->mesh();
  const int nqp = space_->nqp();
  cache_.a_xi.resize(static_cast<std::size_t>(m.num_cells()) * nqp);
  cache_.a_eta.resize(cache_.a_xi.size());
  for (int c = 0; c < m.num_cells(); ++c) {
    const CellQuadrature& cq = m.cell_quad(c);
    for (int q = 0; q < nqp; ++q) {
      const Vec3 u = velocity_->velocity(cq.points[q], t);
      cache_.a_xi[static_cast<std::size_t>(c) * nqp + q] = dot(cq.dual_xi[q], u);
      cache_.a_eta[static_cast<std::size_t>(c) * nqp + q] = dot(cq.dual_eta[q], u);
    }
  }
  const auto& facets = m.interior_facets();
  cache_.un.resize(facets.size());
  for (std::size_t f = 0; f < facets.size(); ++f) {
    const FacetQuadrature& fq = m.facet_quad(static_cast<int>(f));
    auto& un = cache_.un[f];
    un.resize(fq.weights.size());
    for (std::size_t k = 0; k < un.size(); ++k) un[k] = dot(velocity_->velocity(fq.points[k], t), fq.normals[k]);
  }
  cache_.t = t;
  cache_.valid = true;
  return cache_;
}

void DgTransport::traces(const Field& f, std::vector<std::vector<double>>& plus,
                         std::vector<std::vector<double>>& minus) const
{
  const auto& facets = space_->mesh().interior_facets();
  const int nloc = space_->nloc();
  const int nf = space_->mesh().default_nq();
  plus.assign(facets.size(), std::vector<double>(nf));
  minus.assign(facets.size(), std::vector<double>(nf));
  for (std::size_t i = 0; i < facets.size(); ++i) {
    const FacetRecord& r = facets[i];
    const auto& tp = space_->basis_at_facet(r.local_plus, false);
    const auto& tm = space_->basis_at_facet(r.local_minus, r.reversed);
    const auto dp = space_->cell_dofs(r.cell_plus);
    const auto dm = space_->cell_dofs(r.cell_minus);
    for (int k = 0; k < nf; ++k) {
      double vp = 0.0, vm = 0.0;
      for (int a = 0; a < nloc; ++a) {
        vp += tp[k * nloc + a] * f[dp[a]];
        vm += tm[k * nloc + a] * f[dm[a]];
      }
      plus[i][k] = vp;
      minus[i][k] = vm;
    }
  }
}

std::vector<double> DgTransport::flux_residual(const std::vector<double>& cell_vals,
                                               const std::vector<std::vector<double>>& trace_plus,
                                               const std::vector<std::vector<double>>& trace_minus, double t) const
{
  const Samples& s = samples(t);
  const Mesh& m = space_->mesh();
  const int nqp = space_->nqp();
  const int nloc = space_->nloc();
  const auto& dxi = space_->dxi_at_qp();
  const auto& deta = space_->deta_at_qp();
  std::vector<double> r(space_->ndof(), 0.0);

  // Facet-major, fixed order.
  const auto& facets = m.interior_facets();
  for (std::size_t i = 0; i < facets.size(); ++i) {
    const FacetRecord& rec = facets[i];
    const FacetQuadrature& fq = m.facet_quad(static_cast<int>(i));
    const auto& tp = space_->basis_at_facet(rec.local_plus, false);
    const auto& tm = space_->basis_at_facet(rec.local_minus, rec.reversed);
    const auto dp = space_->cell_dofs(rec.cell_plus);
    const auto dm = space_->cell_dofs(rec.cell_minus);
    for (std::size_t k = 0; k < fq.weights.size(); ++k) {
      const double un = s.un[i][k];
      const double flux = fq.weights[k] * un * upwind_trace(trace_plus[i][k], trace_minus[i][k], un);
      for (int a = 0; a < nloc; ++a) {
        r[dp[a]] -= flux * tp[k * nloc + a];
        r[dm[a]] += flux * tm[k * nloc + a];
      }
    }
  }

  for (int c = 0; c < m.num_cells(); ++c) {
    const auto& w = m.cell_quad(c).weights;
    const auto dofs = space_->cell_dofs(c);
    for (int q = 0; q < nqp; ++q) {
      const std::size_t cq = static_cast<std::size_t>(c) * nqp + q;
      const double f = w[q] * cell_vals[cq];
      const double ax = f * s.a_xi[cq];
      const double ae = f * s.a_eta[cq];
      for (int a = 0; a < nloc; ++a) r[dofs[a]] += ax * dxi[q * nloc + a] + ae * deta[q * nloc + a];
    }
  }
  return r;
}

std::vector<double> DgTransport::conservative_residual(const Field& q, double t) const
{
  require(q.space_ptr() == space_, "DgTransport: field is not on the transport space");
  std::vector<std::vector<double>> tp, tm;
  traces(q, tp, tm);
  return flux_residual(q.at_quadrature(), tp, tm, t);
}

std::vector<double> DgTransport::conservative_rhs(const Field& q, double t) const
{
  return space_->solve_mass(conservative_residual(q, t));
}

std::vector<double> DgTransport::product_rhs(const Field& rho, const Field& m, double t) const
{
  require(rho.space_ptr() == space_ && m.space_ptr() == space_, "DgTransport: fields are not on the transport space");
  std::vector<std::vector<double>> rp, rm, mp, mm;
  traces(rho, rp, rm);
  traces(m, mp, mm);
  for (std::size_t i = 0; i < rp.size(); ++i)
    for (std::size_t k = 0; k < rp[i].size(); ++k) {
      rp[i][k] *= mp[i][k];
      rm[i][k] *= mm[i][k];
    }
  auto vals = rho.at_quadrature();
  const auto mv = m.at_quadrature();
  for (std::size_t k = 0; k < vals.size(); ++k) vals[k] *= mv[k];
  return space_->solve_mass(flux_residual(vals, rp, rm, t));
}

std::vector<double> DgTransport::advective_rhs(const Field& mf, double t) const
{
  require(mf.space_ptr() == space_, "DgTransport: field is not on the transport space");
  const Samples& s = samples(t);
  const Mesh& mesh = space_->mesh();
  const int nqp = space_->nqp();
  const int nloc = space_->nloc();
  const auto& phi = space_->basis_at_qp();
  const auto& dxi = space_->dxi_at_qp();
  const auto& deta = space_->deta_at_qp();
  std::vector<double> r(space_->ndof(), 0.0);
  std::vector<std::vector<double>> tp, tm;
  traces(mf, tp, tm);

  const auto& facets = mesh.interior_facets();
  for (std::size_t i = 0; i < facets.size(); ++i) {
    const FacetRecord& rec = facets[i];
    const FacetQuadrature& fq = mesh.facet_quad(static_cast<int>(i));
    const auto& bp = space_->basis_at_facet(rec.local_plus, false);
    const auto& bm = space_->basis_at_facet(rec.local_minus, rec.reversed);
    const auto dp = space_->cell_dofs(rec.cell_plus);
    const auto dm = space_->cell_dofs(rec.cell_minus);
    for (std::size_t k = 0; k < fq.weights.size(); ++k) {
      const double un = s.un[i][k];
      // Only the downwind side sees a jump.
      const double jump = fq.weights[k] * un * (tp[i][k] - tm[i][k]);
      if (un >= 0.0) {
        for (int a = 0; a < nloc; ++a) r[dm[a]] += jump * bm[k * nloc + a];
      } else {
        for (int a = 0; a < nloc; ++a) r[dp[a]] += jump * bp[k * nloc + a];
      }
    }
  }

  std::vector<double> local(nloc);
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const auto& w = mesh.cell_quad(c).weights;
    const auto dofs = space_->cell_dofs(c);
    for (int a = 0; a < nloc; ++a) local[a] = mf[dofs[a]];
    for (int q = 0; q < nqp; ++q) {
      const std::size_t cq = static_cast<std::size_t>(c) * nqp + q;
      double gx = 0.0, ge = 0.0;
      for (int a = 0; a < nloc; ++a) {
        gx += dxi[q * nloc + a] * local[a];
        ge += deta[q * nloc + a] * local[a];
      }
      const double adv = w[q] * (s.a_xi[cq] * gx + s.a_eta[cq] * ge);
      for (int a = 0; a < nloc; ++a) r[dofs[a]] -= adv * phi[q * nloc + a];
    }
  }
  return space_->solve_mass(r);
}

Field identify_mixing_ratio(const Field& q, const Field& rho, double eps_rho)
{
  require(q.space_ptr() == rho.space_ptr(), "identify_mixing_ratio: q and rho must share a space");
  const FunctionSpace& V = q.space();
  require(V.fully_discontinuous(), "identify_mixing_ratio: space must be fully discontinuous");
  if (eps_rho <= 0.0) {
    const double area = [&] {
      CompensatedSum s;
      for (double a : V.mesh().cell_areas()) s.add(a);
      return s.value();
    }();
    eps_rho = 1e-12 * std::abs(integrate(rho)) / area;
  }
  for (int d = 0; d < rho.size(); ++d) {
    if (!(std::abs(rho[d]) >= eps_rho)) {
      std::ostringstream os;
      const Vec3& p = V.dof_points()[d];
      os << "identify_mixing_ratio: density " << rho[d] << " below threshold " << eps_rho << " at node " << d << " ("
         << p[0] << ", " << p[1] << ", " << p[2] << "), q = " << q[d];
      throw Error(os.str());
    }
  }
  const auto rhs = V.assemble_load(q.at_quadrature());
  const auto w = rho.at_quadrature();
  return Field(q.space_ptr(), V.solve_mass(rhs, &w));
}

State ssprk3_step(const State& s0, const RhsFunction& rhs, double t, double dt, const StageHook& hook)
{
  require(dt > 0.0, "ssprk3_step: dt must be positive");
  auto check = [](const State& s, int stage) {
    for (const auto& v : s)
      for (double x : v)
        if (!std::isfinite(x)) throw Error("ssprk3_step: non-finite value after stage " + std::to_string(stage));
  };
  auto stage = [&](const State& base, double wb, const State& from, double wf, double tf, int index) {
    const State L = rhs(from, tf);
    require(L.size() == from.size(), "ssprk3_step: rhs returned the wrong number of components");
    State out(base.size());
    for (std::size_t i = 0; i < base.size(); ++i) {
      out[i].resize(base[i].size());
      for (std::size_t j = 0; j < base[i].size(); ++j) out[i][j] = wb * base[i][j] + wf * (from[i][j] + dt * L[i][j]);
    }
    if (hook) hook(out, index);
    check(out, index);
    return out;
  };
  const State s1 = stage(s0, 0.0, s0, 1.0, t, 1);
  const State s2 = stage(s0, 0.75, s1, 0.25, t + dt, 2);
  return stage(s0, 1.0 / 3.0, s2, 2.0 / 3.0, t + 0.5 * dt, 3);
}

} // namespace ctdg
