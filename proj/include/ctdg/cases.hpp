#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "ctdg/chemistry.hpp"
#include "ctdg/mesh.hpp"
#include "ctdg/velocity.hpp"

namespace ctdg {

enum class CaseId { A1Convergence, A1Consistency, A2Convergence, A2Consistency, A3Slotted, A4Terminator };

/// Constants of the test cases. SI units; angles in radians.
struct CaseConstants {
  // sphere
  double radius = 6371220.0;
  double tau_sphere = 1036800.0;
  double dt_sphere_ref = 450.0;
  int ne_ref = 24;
  double b0 = 5.0;
  double rho_b_sphere = 1.0;
  double m0 = 0.02;
  double gmax_convergence = 0.05;
  double gmax_consistency = 0.5;
  std::array<double, 2> centre1{-0.25 * 3.14159265358979323846, 0.0};
  std::array<double, 2> centre2{0.25 * 3.14159265358979323846, 0.0};
  // slice
  double lx = 2000.0;
  double hz = 2000.0;
  double tau_slice = 2000.0;
  double dt_slice_ref = 2.0;
  double rho_b_slice_convergence = 1.0;
  double rho_t_slice = 0.5;
  double f0_convergence = 0.05;
  double rho_b_slice_consistency = 0.5;
  double f0_consistency = 0.5;
  double lc = 2.0 * 2000.0 / 25.0;
  std::array<double, 2> slice_centre1{3.0 * 2000.0 / 8.0, 1000.0};
  std::array<double, 2> slice_centre2{5.0 * 2000.0 / 8.0, 1000.0};
  // slotted cylinders
  double cylinder_radius = 0.5;
  double slot_half_width = 1.0 / 12.0;
  double slot_offset = 5.0 / 24.0;
  // terminator
  ChemistryParams chemistry;
};

const CaseConstants& case_constants();

using ScalarFunction = std::function<double(const Vec3&)>;

std::string case_name(CaseId id);
CaseId parse_case(const std::string& name);
const std::vector<CaseId>& all_cases();

bool case_on_sphere(CaseId id);
/// Return period of the flow.
double case_period(CaseId id);
/// Number of transported mixing ratios (two for the terminator: X, X2).
int case_tracer_count(CaseId id);
/// Weights w_i in the tracer density rho * sum_i w_i m_i.
std::vector<double> case_tracer_weights(CaseId id);
/// Desk-scale default timestep for a resolution (ne on the sphere, N on the slice).
double case_default_dt(CaseId id, int resolution);

VelocityPtr velocity_case(CaseId id);
ScalarFunction initial_density(CaseId id);
std::vector<ScalarFunction> initial_mixing_ratios(CaseId id);

/// Sum of the two Gaussian bumps on the sphere with amplitude gmax.
double sphere_gaussians(const Vec3& x, double gmax);
/// Sum of the two periodic Gaussian bumps on the slice with amplitude f0.
double slice_gaussians(const Vec3& x, double f0);
/// Slotted-cylinder indicator.
double slotted_cylinders(const Vec3& x);

} // namespace ctdg
