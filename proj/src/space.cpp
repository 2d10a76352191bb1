#include "ctdg/space.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "ctdg/error.hpp"
#include "ctdg/quadrature.hpp"

namespace ctdg {

namespace {

const char* family(const Element1D& e) { return e.continuity == Continuity::Continuous ? "Q" : "DQ"; }

} // namespace

std::string SpaceSpec::name() const
{
  std::ostringstream os;
  os << family(horizontal) << horizontal.order << "x" << family(vertical) << vertical.order;
  return os.str();
}

SpaceSpec SpaceSpec::rho0() { return {{Continuity::Discontinuous, 0}, {Continuity::Discontinuous, 0}}; }
SpaceSpec SpaceSpec::rho1() { return {{Continuity::Discontinuous, 1}, {Continuity::Discontinuous, 1}}; }
SpaceSpec SpaceSpec::theta0() { return {{Continuity::Discontinuous, 0}, {Continuity::Continuous, 1}}; }
SpaceSpec SpaceSpec::theta1() { return {{Continuity::Discontinuous, 1}, {Continuity::Continuous, 2}}; }
SpaceSpec SpaceSpec::recovered1() { return {{Continuity::Continuous, 1}, {Continuity::Continuous, 1}}; }
SpaceSpec SpaceSpec::theta_hat() { return {{Continuity::Discontinuous, 1}, {Continuity::Discontinuous, 2}}; }

double lagrange_node(int order, int k)
{
  if (order == 0) return 0.0;
  return -1.0 + 2.0 * k / order;
}

double lagrange_value(int order, int k, double x)
{
  double v = 1.0;
  const double xk = lagrange_node(order, k);
  for (int m = 0; m <= order; ++m) {
    if (m == k) continue;
    const double xm = lagrange_node(order, m);
    v *= (x - xm) / (xk - xm);
  }
  return v;
}

double lagrange_derivative(int order, int k, double x)
{
  const double xk = lagrange_node(order, k);
  double sum = 0.0;
  for (int l = 0; l <= order; ++l) {
    if (l == k) continue;
    double term = 1.0 / (xk - lagrange_node(order, l));
    for (int m = 0; m <= order; ++m) {
      if (m == k || m == l) continue;
      const double xm = lagrange_node(order, m);
      term *= (x - xm) / (xk - xm);
    }
    sum += term;
  }
  return sum;
}

FunctionSpace::FunctionSpace(std::shared_ptr<const Mesh> mesh, SpaceSpec spec)
    : mesh_(std::move(mesh)), spec_(spec)
{
  const int ph = spec_.horizontal.order;
  const int pv = spec_.vertical.order;
  nloc_ = (ph + 1) * (pv + 1);
  for (int b = 0; b <= pv; ++b)
    for (int a = 0; a <= ph; ++a) node_ref_.push_back({lagrange_node(ph, a), lagrange_node(pv, b)});

  const Mesh& m = *mesh_;
  const bool hc = spec_.horizontal.continuity == Continuity::Continuous;
  const bool vc = spec_.vertical.continuity == Continuity::Continuous;
  std::map<std::array<long long, 4>, int> ids;
  cell_dofs_.resize(static_cast<std::size_t>(m.num_cells()) * nloc_);
  for (int c = 0; c < m.num_cells(); ++c) {
    const auto [i, j] = m.cell_ij(c);
    for (int b = 0; b <= pv; ++b) {
      for (int a = 0; a <= ph; ++a) {
        std::array<long long, 4> key{};
        if (m.kind() == MeshKind::Slice) {
          if (hc)
            key[0] = (static_cast<long long>(i) * ph + a) % (static_cast<long long>(m.nx()) * ph), key[1] = -1;
          else
            key[0] = i, key[1] = a;
          if (vc)
            key[2] = static_cast<long long>(j) * pv + b, key[3] = -1;
          else
            key[2] = j, key[3] = b;
        } else if (hc) {
          key = {m.cell_vertices(c)[a + 2 * b], -3, -3, -3};
        } else {
          key = {c, b * (ph + 1) + a, -2, -2};
        }
        auto [it, inserted] = ids.try_emplace(key, ndof_);
        if (inserted) {
          ++ndof_;
          const auto& ref = node_ref_[b * (ph + 1) + a];
          dof_points_.push_back(m.map(c, ref[0], ref[1]).x);
        }
        cell_dofs_[static_cast<std::size_t>(c) * nloc_ + b * (ph + 1) + a] = it->second;
      }
    }
  }

  const CellQuadrature& q0 = m.cell_quad(0);
  nqp_ = static_cast<int>(q0.weights.size());
  basis_q_.resize(static_cast<std::size_t>(nqp_) * nloc_);
  dxi_q_.resize(basis_q_.size());
  deta_q_.resize(basis_q_.size());
  for (int q = 0; q < nqp_; ++q) {
    basis(q0.xi[q], q0.eta[q], {basis_q_.data() + q * nloc_, static_cast<std::size_t>(nloc_)});
    basis_gradient(q0.xi[q], q0.eta[q], {dxi_q_.data() + q * nloc_, static_cast<std::size_t>(nloc_)},
                   {deta_q_.data() + q * nloc_, static_cast<std::size_t>(nloc_)});
  }
  const GaussRule g = gauss_legendre(m.default_nq());
  const int nf = m.default_nq();
  for (int lf = 0; lf < 4; ++lf) {
    for (int rev = 0; rev < 2; ++rev) {
      auto& tab = facet_basis_[lf * 2 + rev];
      tab.resize(static_cast<std::size_t>(nf) * nloc_);
      for (int k = 0; k < nf; ++k) {
        const double s = rev ? -g.points[k] : g.points[k];
        const auto ref = facet_reference_point(lf, s);
        basis(ref[0], ref[1], {tab.data() + k * nloc_, static_cast<std::size_t>(nloc_)});
      }
    }
  }

  if (fully_discontinuous()) {
    cell_mass_.reserve(m.num_cells());
    for (int c = 0; c < m.num_cells(); ++c) {
      cell_mass_.emplace_back(cell_mass_matrix(c, nullptr));
      require(cell_mass_.back().info() == Eigen::Success, "mass matrix not positive definite in cell " + std::to_string(c));
    }
  } else {
    global_mass_ = std::make_shared<Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>>>();
    global_mass_->compute(global_mass_matrix(nullptr));
    require(global_mass_->info() == Eigen::Success, "global mass matrix factorization failed");
  }
}

void FunctionSpace::basis(double xi, double eta, std::span<double> out) const
{
  const int ph = spec_.horizontal.order;
  const int pv = spec_.vertical.order;
  for (int b = 0; b <= pv; ++b) {
    const double lv = lagrange_value(pv, b, eta);
    for (int a = 0; a <= ph; ++a) out[b * (ph + 1) + a] = lagrange_value(ph, a, xi) * lv;
  }
}

void FunctionSpace::basis_gradient(double xi, double eta, std::span<double> dxi, std::span<double> deta) const
{
  const int ph = spec_.horizontal.order;
  const int pv = spec_.vertical.order;
  for (int b = 0; b <= pv; ++b) {
    const double lv = lagrange_value(pv, b, eta);
    const double dlv = lagrange_derivative(pv, b, eta);
    for (int a = 0; a <= ph; ++a) {
      dxi[b * (ph + 1) + a] = lagrange_derivative(ph, a, xi) * lv;
      deta[b * (ph + 1) + a] = lagrange_value(ph, a, xi) * dlv;
    }
  }
}

std::vector<double> FunctionSpace::assemble_load(std::span<const double> integrand) const
{
  const Mesh& m = *mesh_;
  require(integrand.size() == static_cast<std::size_t>(m.num_cells()) * nqp_, "assemble_load: integrand size mismatch");
  std::vector<double> rhs(ndof_, 0.0);
  std::vector<double> local(nloc_);
  for (int c = 0; c < m.num_cells(); ++c) {
    std::fill(local.begin(), local.end(), 0.0);
    const auto& w = m.cell_quad(c).weights;
    for (int q = 0; q < nqp_; ++q) {
      const double f = w[q] * integrand[static_cast<std::size_t>(c) * nqp_ + q];
      const double* phi = basis_q_.data() + q * nloc_;
      for (int i = 0; i < nloc_; ++i) local[i] += f * phi[i];
    }
    const auto dofs = cell_dofs(c);
    for (int i = 0; i < nloc_; ++i) rhs[dofs[i]] += local[i];
  }
  return rhs;
}

FunctionSpace::LocalMatrix FunctionSpace::cell_mass_matrix(int cell, const std::vector<double>* weight) const
{
  const auto& w = mesh_->cell_quad(cell).weights;
  double acc[81] = {};
  for (int q = 0; q < nqp_; ++q) {
    double wq = w[q];
    if (weight) wq *= (*weight)[static_cast<std::size_t>(cell) * nqp_ + q];
    const double* phi = basis_q_.data() + q * nloc_;
    for (int i = 0; i < nloc_; ++i) {
      const double wi = wq * phi[i];
      for (int j = 0; j <= i; ++j) acc[i * nloc_ + j] += wi * phi[j];
    }
  }
  LocalMatrix mat(nloc_, nloc_);
  for (int i = 0; i < nloc_; ++i)
    for (int j = 0; j <= i; ++j) mat(i, j) = mat(j, i) = acc[i * nloc_ + j];
  return mat;
}

Eigen::SparseMatrix<double> FunctionSpace::global_mass_matrix(const std::vector<double>* weight) const
{
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<std::size_t>(mesh_->num_cells()) * nloc_ * nloc_);
  for (int c = 0; c < mesh_->num_cells(); ++c) {
    const LocalMatrix local = cell_mass_matrix(c, weight);
    const auto dofs = cell_dofs(c);
    for (int i = 0; i < nloc_; ++i)
      for (int j = 0; j < nloc_; ++j) trips.emplace_back(dofs[i], dofs[j], local(i, j));
  }
  Eigen::SparseMatrix<double> mat(ndof_, ndof_);
  mat.setFromTriplets(trips.begin(), trips.end());
  return mat;
}

std::vector<double> FunctionSpace::solve_mass(std::span<const double> rhs, const std::vector<double>* weight) const
{
  require(rhs.size() == static_cast<std::size_t>(ndof_), "solve_mass: rhs size mismatch");
  if (weight)
    require(weight->size() == static_cast<std::size_t>(mesh_->num_cells()) * nqp_, "solve_mass: weight size mismatch");
  std::vector<double> x(ndof_, 0.0);
  if (fully_discontinuous()) {
    LocalVector b(nloc_);
    for (int c = 0; c < mesh_->num_cells(); ++c) {
      const auto dofs = cell_dofs(c);
      for (int i = 0; i < nloc_; ++i) b[i] = rhs[dofs[i]];
      LocalVector sol;
      if (weight) {
        Eigen::LLT<LocalMatrix> llt(cell_mass_matrix(c, weight));
        if (llt.info() != Eigen::Success)
          throw Error("weighted mass matrix is not positive definite in cell " + std::to_string(c) +
                      " (density weight not positive?)");
        sol = llt.solve(b);
      } else {
        sol = cell_mass_[c].solve(b);
      }
      for (int i = 0; i < nloc_; ++i) x[dofs[i]] = sol[i];
    }
    return x;
  }
  const Eigen::Map<const Eigen::VectorXd> b(rhs.data(), ndof_);
  Eigen::VectorXd sol;
  if (weight) {
    const Eigen::SparseMatrix<double> mat = global_mass_matrix(weight);
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(mat);
    if (ldlt.info() != Eigen::Success || (ldlt.vectorD().array() <= 0.0).any())
      throw Error("weighted global mass matrix is not positive definite (density weight not positive?)");
    sol = ldlt.solve(b);
    const double res = (mat * sol - b).norm();
    if (res > 1e-12 * std::max(b.norm(), 1e-300))
      throw Error("weighted mass solve did not meet tolerance: residual " + std::to_string(res));
  } else {
    sol = global_mass_->solve(b);
  }
  for (int i = 0; i < ndof_; ++i) x[i] = sol[i];
  return x;
}

std::string FunctionSpace::solver_description() const
{
  return fully_discontinuous() ? "block-diagonal dense Cholesky (Eigen::LLT)" : "global sparse direct (Eigen::SimplicialLDLT)";
}

SpacePtr make_space(std::shared_ptr<const Mesh> mesh, const SpaceSpec& spec)
{
  require(mesh != nullptr, "make_space: null mesh");
  for (const Element1D* e : {&spec.horizontal, &spec.vertical}) {
    require(e->order >= 0 && e->order <= 2, "make_space: element order must be 0, 1 or 2 in " + spec.name());
    require(e->continuity == Continuity::Discontinuous || e->order >= 1,
            "make_space: continuous elements need order >= 1 in " + spec.name());
  }
  if (mesh->kind() == MeshKind::CubedSphere) {
    const bool dq = spec.fully_discontinuous() && spec.horizontal.order == spec.vertical.order &&
                    spec.horizontal.order <= 1;
    const bool q1 = spec == SpaceSpec::recovered1();
    require(dq || q1, "make_space: " + spec.name() +
                          " is not available on the cubed sphere (only DQ0, DQ1 and the recovered Q1 space; "
                          "vertically continuous spaces need a slice mesh)");
  }
  return std::make_shared<const FunctionSpace>(std::move(mesh), spec);
}

Field::Field(SpacePtr space, double value) : space_(std::move(space))
{
  require(space_ != nullptr, "Field: null space");
  coeffs_.assign(space_->ndof(), value);
}

Field::Field(SpacePtr space, std::vector<double> coeffs) : space_(std::move(space)), coeffs_(std::move(coeffs))
{
  require(space_ != nullptr, "Field: null space");
  require(static_cast<int>(coeffs_.size()) == space_->ndof(), "Field: coefficient count does not match the space");
}

double Field::evaluate(int cell, double xi, double eta) const
{
  require(xi >= -1.0 && xi <= 1.0 && eta >= -1.0 && eta <= 1.0, "Field::evaluate: reference point outside [-1,1]^2");
  require(cell >= 0 && cell < space_->mesh().num_cells(), "Field::evaluate: invalid cell");
  std::vector<double> phi(space_->nloc());
  space_->basis(xi, eta, phi);
  const auto dofs = space_->cell_dofs(cell);
  double v = 0.0;
  for (int i = 0; i < space_->nloc(); ++i) v += phi[i] * coeffs_[dofs[i]];
  return v;
}

std::array<double, 4> Field::evaluate_at_vertices(int cell) const
{
  return {evaluate(cell, -1.0, -1.0), evaluate(cell, 1.0, -1.0), evaluate(cell, -1.0, 1.0), evaluate(cell, 1.0, 1.0)};
}

std::vector<double> Field::at_quadrature() const
{
  const int nqp = space_->nqp();
  const int nloc = space_->nloc();
  const int ncell = space_->mesh().num_cells();
  const auto& tab = space_->basis_at_qp();
  std::vector<double> out(static_cast<std::size_t>(ncell) * nqp);
  std::vector<double> local(nloc);
  for (int c = 0; c < ncell; ++c) {
    const auto dofs = space_->cell_dofs(c);
    for (int i = 0; i < nloc; ++i) local[i] = coeffs_[dofs[i]];
    for (int q = 0; q < nqp; ++q) {
      const double* phi = tab.data() + q * nloc;
      double v = 0.0;
      for (int i = 0; i < nloc; ++i) v += phi[i] * local[i];
      out[static_cast<std::size_t>(c) * nqp + q] = v;
    }
  }
  return out;
}

double Field::min() const { return *std::min_element(coeffs_.begin(), coeffs_.end()); }
double Field::max() const { return *std::max_element(coeffs_.begin(), coeffs_.end()); }

bool Field::all_finite() const
{
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](double v) { return std::isfinite(v); });
}

Field& Field::axpy(double a, const Field& other)
{
  require(other.space_ == space_, "Field::axpy: fields live on different spaces");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += a * other.coeffs_[i];
  return *this;
}

Field& Field::scale(double a)
{
  for (double& v : coeffs_) v *= a;
  return *this;
}

Field interpolate(const SpacePtr& space, const std::function<double(const Vec3&)>& f)
{
  Field out(space);
  const auto& pts = space->dof_points();
  for (int d = 0; d < space->ndof(); ++d) {
    const double v = f(pts[d]);
    if (!std::isfinite(v)) {
      std::ostringstream os;
      os << "interpolate: non-finite value at node (" << pts[d][0] << ", " << pts[d][1] << ", " << pts[d][2] << ")";
      throw Error(os.str());
    }
    out[d] = v;
  }
  return out;
}

std::vector<double> cell_integrals_of_product(const Field& a, const Field& b)
{
  require(a.space().mesh_ptr() == b.space().mesh_ptr(), "integrate_product: fields live on different meshes");
  const Mesh& m = a.space().mesh();
  const auto va = a.at_quadrature();
  const auto vb = b.at_quadrature();
  const int nqp = a.space().nqp();
  std::vector<double> out(m.num_cells());
  for (int c = 0; c < m.num_cells(); ++c) {
    const auto& w = m.cell_quad(c).weights;
    CompensatedSum s;
    for (int q = 0; q < nqp; ++q) {
      const std::size_t k = static_cast<std::size_t>(c) * nqp + q;
      s.add(w[q] * va[k] * vb[k]);
    }
    out[c] = s.value();
  }
  return out;
}

double integrate_product(const Field& a, const Field& b)
{
  CompensatedSum total;
  for (double v : cell_integrals_of_product(a, b)) total.add(v);
  return total.value();
}

double integrate(const Field& f)
{
  const Mesh& m = f.space().mesh();
  const auto v = f.at_quadrature();
  const int nqp = f.space().nqp();
  CompensatedSum total;
  for (int c = 0; c < m.num_cells(); ++c) {
    const auto& w = m.cell_quad(c).weights;
    CompensatedSum s;
    for (int q = 0; q < nqp; ++q) s.add(w[q] * v[static_cast<std::size_t>(c) * nqp + q]);
    total.add(s.value());
  }
  return total.value();
}

} // namespace ctdg
