#pragma once

#include <functional>
#include <vector>

#include "ctdg/space.hpp"
#include "ctdg/velocity.hpp"

namespace ctdg {

/// Value from the + side when u.n+ >= 0, otherwise from the - side.
inline double upwind_trace(double value_plus, double value_minus, double un_plus)
{
  return un_plus >= 0.0 ? value_plus : value_minus;
}

/// DG upwind transport operators on a fully discontinuous space. Every rhs
/// returns the time tendency (mass matrix already inverted) as coefficients.
/// Velocity samples are cached for the most recent time, so an instance is not
/// safe to share between threads.
class DgTransport {
public:
  DgTransport(SpacePtr space, VelocityPtr velocity);

  const FunctionSpace& space() const { return *space_; }
  const SpacePtr& space_ptr() const { return space_; }
  const VelocityModel& velocity() const { return *velocity_; }

  /// Flux form for a density-like field q.
  std::vector<double> conservative_rhs(const Field& q, double t) const;
  /// Flux form for the product rho*m, evaluated pointwise with a single upwind trace.
  std::vector<double> product_rhs(const Field& rho, const Field& m, double t) const;
  /// Advective form for a mixing ratio. Written cell by cell with inflow jump
  /// terms, so a constant field has exactly zero tendency.
  std::vector<double> advective_rhs(const Field& m, double t) const;

  /// Unweighted residuals before the mass solve (test function integrals).
  std::vector<double> conservative_residual(const Field& q, double t) const;

private:
  struct Samples {
    double t = 0.0;
    bool valid = false;
    std::vector<double> a_xi, a_eta;          // dual . u at cell points
    std::vector<std::vector<double>> un;      // u . n+ per interior facet point
  };

  const Samples& samples(double t) const;
  std::vector<double> flux_residual(const std::vector<double>& cell_vals,
                                    const std::vector<std::vector<double>>& trace_plus,
                                    const std::vector<std::vector<double>>& trace_minus, double t) const;
  void traces(const Field& f, std::vector<std::vector<double>>& plus, std::vector<std::vector<double>>& minus) const;

  SpacePtr space_;
  VelocityPtr velocity_;
  mutable Samples cache_;
};

/// Identification of m from q = rho*m: solves int eta rho m = int eta q per cell.
/// Rejects any node where |rho| < eps_rho (eps_rho <= 0 selects 1e-12 times the
/// domain-mean density).
Field identify_mixing_ratio(const Field& q, const Field& rho, double eps_rho = 0.0);

/// A list of coefficient vectors advanced together by the Runge-Kutta scheme.
using State = std::vector<std::vector<double>>;
using RhsFunction = std::function<State(const State&, double)>;
using StageHook = std::function<void(State&, int)>;

/// Three-stage strong stability preserving Runge-Kutta step with stage times
/// t, t+dt, t+dt/2. The hook (if any) runs after every stage update.
State ssprk3_step(const State& state, const RhsFunction& rhs, double t, double dt, const StageHook& hook = {});

} // namespace ctdg
