#pragma once

#include <algorithm>
#include <array>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>

#include "ctdg/mesh.hpp"

namespace ctdg {

enum class Continuity { Discontinuous, Continuous };

struct Element1D {
  Continuity continuity = Continuity::Discontinuous;
  int order = 0;

  bool operator==(const Element1D&) const = default;
};

/// Tensor-product element: horizontal (xi) by vertical (eta) 1D Lagrange families.
struct SpaceSpec {
  Element1D horizontal;
  Element1D vertical;

  bool fully_discontinuous() const
  {
    return horizontal.continuity == Continuity::Discontinuous && vertical.continuity == Continuity::Discontinuous;
  }
  int max_order() const { return std::max(horizontal.order, vertical.order); }
  std::string name() const;

  bool operator==(const SpaceSpec&) const = default;

  static SpaceSpec rho0();        // DQ0 x DQ0
  static SpaceSpec rho1();        // DQ1 x DQ1
  static SpaceSpec theta0();      // DQ0 x Q1
  static SpaceSpec theta1();      // DQ1 x Q2
  static SpaceSpec recovered1();  // Q1 x Q1
  static SpaceSpec theta_hat();   // DQ1 x DQ2
};

/// 1D Lagrange basis on equispaced nodes in [-1, 1] (the midpoint for order 0).
double lagrange_node(int order, int k);
double lagrange_value(int order, int k, double x);
double lagrange_derivative(int order, int k, double x);

/// Finite element space over a mesh. Local nodes are numbered lexicographically,
/// horizontal index fastest. Global dofs are numbered by first appearance when
/// visiting cells in index order, so a shared dof belongs to its lowest cell.
class FunctionSpace {
public:
  /// Local matrices never exceed 3x3 nodes, so they live on the stack.
  using LocalMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 9, 9>;
  using LocalVector = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 9, 1>;

  FunctionSpace(std::shared_ptr<const Mesh> mesh, SpaceSpec spec);

  const Mesh& mesh() const { return *mesh_; }
  const std::shared_ptr<const Mesh>& mesh_ptr() const { return mesh_; }
  const SpaceSpec& spec() const { return spec_; }
  int ndof() const { return ndof_; }
  int nloc() const { return nloc_; }
  int nqp() const { return nqp_; }
  bool fully_discontinuous() const { return spec_.fully_discontinuous(); }

  std::span<const int> cell_dofs(int cell) const
  {
    return {cell_dofs_.data() + static_cast<std::size_t>(cell) * nloc_, static_cast<std::size_t>(nloc_)};
  }
  /// Reference coordinates of local node `k`.
  std::array<double, 2> node_reference(int k) const { return node_ref_[k]; }
  /// Local node index (horizontal a, vertical b).
  int local_node(int a, int b) const { return b * (spec_.horizontal.order + 1) + a; }
  const std::vector<Vec3>& dof_points() const { return dof_points_; }

  void basis(double xi, double eta, std::span<double> out) const;
  void basis_gradient(double xi, double eta, std::span<double> dxi, std::span<double> deta) const;

  /// Basis tabulated at the mesh default cell rule: [qp * nloc + i].
  const std::vector<double>& basis_at_qp() const { return basis_q_; }
  const std::vector<double>& dxi_at_qp() const { return dxi_q_; }
  const std::vector<double>& deta_at_qp() const { return deta_q_; }
  /// Basis at facet quadrature points: [(local_facet*2 + reversed)][q * nloc + i].
  const std::vector<double>& basis_at_facet(int local, bool reversed) const
  {
    return facet_basis_[local * 2 + (reversed ? 1 : 0)];
  }

  /// rhs_i = sum over cells and qps of w * f * phi_i, with f given per (cell, qp).
  std::vector<double> assemble_load(std::span<const double> integrand) const;

  /// Solves M x = rhs where M_ij = int phi_i phi_j (weight == nullptr) or
  /// int w phi_i phi_j with w given per (cell, qp). Block-diagonal for fully
  /// discontinuous spaces, sparse LDLT otherwise.
  std::vector<double> solve_mass(std::span<const double> rhs, const std::vector<double>* weight = nullptr) const;

  /// Description of the linear solver used for mass systems.
  std::string solver_description() const;

private:
  std::shared_ptr<const Mesh> mesh_;
  SpaceSpec spec_;
  int nloc_ = 0;
  int ndof_ = 0;
  int nqp_ = 0;
  std::vector<int> cell_dofs_;
  std::vector<std::array<double, 2>> node_ref_;
  std::vector<Vec3> dof_points_;
  std::vector<double> basis_q_, dxi_q_, deta_q_;
  std::array<std::vector<double>, 8> facet_basis_;
  std::vector<Eigen::LLT<LocalMatrix>> cell_mass_;
  std::shared_ptr<Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>>> global_mass_;

  LocalMatrix cell_mass_matrix(int cell, const std::vector<double>* weight) const;
  Eigen::SparseMatrix<double> global_mass_matrix(const std::vector<double>* weight) const;
};

using SpacePtr = std::shared_ptr<const FunctionSpace>;

/// Builds a space after checking the spec against the mesh kind.
SpacePtr make_space(std::shared_ptr<const Mesh> mesh, const SpaceSpec& spec);

/// Coefficient vector over a space.
class Field {
public:
  Field() = default;
  explicit Field(SpacePtr space, double value = 0.0);
  Field(SpacePtr space, std::vector<double> coeffs);

  const FunctionSpace& space() const { return *space_; }
  const SpacePtr& space_ptr() const { return space_; }
  std::vector<double>& coeffs() { return coeffs_; }
  const std::vector<double>& coeffs() const { return coeffs_; }
  int size() const { return static_cast<int>(coeffs_.size()); }
  double& operator[](int i) { return coeffs_[i]; }
  double operator[](int i) const { return coeffs_[i]; }

  double evaluate(int cell, double xi, double eta) const;
  /// Corner values in the order (-1,-1), (1,-1), (-1,1), (1,1).
  std::array<double, 4> evaluate_at_vertices(int cell) const;
  /// Values at the default cell quadrature points, [cell * nqp + qp].
  std::vector<double> at_quadrature() const;

  double min() const;
  double max() const;
  bool all_finite() const;

  /// this += a * other
  Field& axpy(double a, const Field& other);
  Field& scale(double a);

private:
  SpacePtr space_;
  std::vector<double> coeffs_;
};

Field interpolate(const SpacePtr& space, const std::function<double(const Vec3&)>& f);
double integrate(const Field& f);
double integrate_product(const Field& a, const Field& b);
/// Per-cell integral of a * b under the default rule.
std::vector<double> cell_integrals_of_product(const Field& a, const Field& b);

} // namespace ctdg
