#include "ctdg/remap.hpp"

#include <algorithm>

#include "ctdg/error.hpp"
#include "ctdg/quadrature.hpp"

namespace ctdg {

namespace {

void same_mesh(const Field& a, const SpacePtr& target, const char* op)
{
  require(target != nullptr, std::string(op) + ": null target space");
  require(a.space().mesh_ptr() == target->mesh_ptr(), std::string(op) + ": fields live on different meshes");
}

std::vector<double> product_at_qp(const Field& a, const Field& b)
{
  auto v = a.at_quadrature();
  const auto w = b.at_quadrature();
  for (std::size_t k = 0; k < v.size(); ++k) v[k] *= w[k];
  return v;
}

double domain_area(const Mesh& mesh)
{
  CompensatedSum s;
  for (double a : mesh.cell_areas()) s.add(a);
  return s.value();
}

} // namespace

Field galerkin_project(const Field& q, const SpacePtr& target)
{
  same_mesh(q, target, "galerkin_project");
  return Field(target, target->solve_mass(target->assemble_load(q.at_quadrature())));
}

Field project_product(const Field& a, const Field& b, const SpacePtr& target)
{
  same_mesh(a, target, "project_product");
  same_mesh(b, target, "project_product");
  return Field(target, target->solve_mass(target->assemble_load(product_at_qp(a, b))));
}

Field conservative_project(const Field& m, const Field& rho_orig, const Field& rho_target, const SpacePtr& target)
{
  return consistent_conservative_project(m, rho_orig, rho_target, target, 0.0);
}

double global_mean(const Field& m) { return integrate(m) / domain_area(m.space().mesh()); }

Field consistent_conservative_project(const Field& m, const Field& rho_orig, const Field& rho_target,
                                      const SpacePtr& target, std::optional<double> mean)
{
  same_mesh(m, target, "conservative_project");
  same_mesh(rho_orig, target, "conservative_project");
  same_mesh(rho_target, target, "conservative_project");
  const double c = mean ? *mean : global_mean(m);
  auto mv = m.at_quadrature();
  const auto ro = rho_orig.at_quadrature();
  for (std::size_t k = 0; k < mv.size(); ++k) mv[k] = ro[k] * (mv[k] - c);
  const auto w = rho_target.at_quadrature();
  std::vector<double> x;
  try {
    x = target->solve_mass(target->assemble_load(mv), &w);
  } catch (const Error& e) {
    throw Error(std::string("conservative_project: ") + e.what());
  }
  for (double& v : x) v += c;
  return Field(target, std::move(x));
}

Field recover_average(const Field& q, const SpacePtr& target)
{
  same_mesh(q, target, "recover_average");
  const SpaceSpec& ts = target->spec();
  require(ts.horizontal.continuity == Continuity::Continuous && ts.vertical.continuity == Continuity::Continuous,
          "recover_average: target space must be continuous");
  const Mesh& mesh = target->mesh();
  const int nloc = target->nloc();
  std::vector<double> sum(target->ndof(), 0.0);
  std::vector<int> count(target->ndof(), 0);
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const auto dofs = target->cell_dofs(c);
    for (int a = 0; a < nloc; ++a) {
      const auto ref = target->node_reference(a);
      sum[dofs[a]] += q.evaluate(c, ref[0], ref[1]);
      ++count[dofs[a]];
    }
  }
  Field out(target);
  for (int d = 0; d < target->ndof(); ++d) out[d] = sum[d] / count[d];

  const bool vdisc = q.space().spec().vertical.continuity == Continuity::Discontinuous;
  if (mesh.kind() == MeshKind::Slice && vdisc && mesh.nz() >= 3 && ts == SpaceSpec::recovered1()) {
    // Q1 x Q1 node in column i at row r (0..nz).
    auto node = [&](int i, int r) {
      const int j = std::min(r, mesh.nz() - 1);
      return target->cell_dofs(mesh.slice_cell(i, j))[target->local_node(0, r == mesh.nz() ? 1 : 0)];
    };
    const int nz = mesh.nz();
    for (int i = 0; i < mesh.nx(); ++i) {
      out[node(i, 0)] = 2.0 * out[node(i, 1)] - out[node(i, 2)];
      out[node(i, nz)] = 2.0 * out[node(i, nz - 1)] - out[node(i, nz - 2)];
    }
  }
  return out;
}

Field inject(const Field& q, const SpacePtr& target)
{
  same_mesh(q, target, "inject");
  const SpaceSpec& s = q.space().spec();
  const SpaceSpec& t = target->spec();
  require(target->fully_discontinuous() && t.horizontal.order >= s.horizontal.order &&
              t.vertical.order >= s.vertical.order,
          "inject: " + t.name() + " does not contain " + s.name());
  Field out(target);
  const Mesh& mesh = target->mesh();
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const auto dofs = target->cell_dofs(c);
    for (int a = 0; a < target->nloc(); ++a) {
      const auto ref = target->node_reference(a);
      out[dofs[a]] = q.evaluate(c, ref[0], ref[1]);
    }
  }
  return out;
}

Field conservative_inject(const Field& m, const Field& rho_orig, const Field& rho_hat, const SpacePtr& target)
{
  require(target != nullptr && target->fully_discontinuous(),
          "conservative_inject: target space must be fully discontinuous");
  return conservative_project(m, rho_orig, rho_hat, target);
}

Field recovery(const Field& q, const SpacePtr& continuous, const SpacePtr& transport)
{
  const Field r = recover_average(q, continuous);
  Field correction = galerkin_project(r, q.space_ptr());
  correction.scale(-1.0).axpy(1.0, q);
  Field out = inject(r, transport);
  out.axpy(1.0, inject(correction, transport));
  return out;
}

Field conservative_recovery(const Field& m, const Field& rho_orig, const Field& rho_rec, const SpacePtr& continuous,
                            std::optional<double> mean)
{
  const SpacePtr& transport = rho_rec.space_ptr();
  const Field rho_t = recover_average(rho_orig, continuous);
  const Field m_t = recover_average(m, continuous);
  const double c = mean ? *mean : global_mean(m);
  Field out = consistent_conservative_project(m_t, rho_t, rho_rec, transport, c);
  Field delta = consistent_conservative_project(m_t, rho_t, rho_orig, m.space_ptr(), c);
  delta.scale(-1.0).axpy(1.0, m);
  // the correction is a difference, so it goes across unshifted
  out.axpy(1.0, consistent_conservative_project(delta, rho_orig, rho_rec, transport, 0.0));
  return out;
}

} // namespace ctdg
