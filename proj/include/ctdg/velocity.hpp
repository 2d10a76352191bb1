#pragma once

#include <memory>
#include <string>
#include <vector>

#include "ctdg/mesh.hpp"

namespace ctdg {

/// Prescribed time-dependent velocity, evaluated at physical points.
/// On the sphere the returned vector is tangent to the sphere (3D Cartesian).
class VelocityModel {
public:
  virtual ~VelocityModel() = default;
  virtual Vec3 velocity(const Vec3& x, double t) const = 0;
  /// Analytic divergence (surface divergence on the sphere).
  virtual double divergence(const Vec3& x, double t) const = 0;
  virtual std::string name() const = 0;
};

using VelocityPtr = std::shared_ptr<const VelocityModel>;

/// Unit vectors of increasing longitude and latitude at a point on the sphere.
std::array<Vec3, 2> sphere_basis(double lon, double lat);

/// Divergent deformational flow with a zonal mean flow on the sphere.
/// lambda' = lambda - 2 pi a t / tau (as printed; note the radius factor).
class DivergentSphereFlow : public VelocityModel {
public:
  DivergentSphereFlow(double radius, double tau);
  Vec3 velocity(const Vec3& x, double t) const override;
  double divergence(const Vec3& x, double t) const override;
  std::string name() const override { return "divergent-sphere"; }
  /// Zonal and meridional components (u, v).
  std::array<double, 2> components(double lon, double lat, double t) const;

  double a, tau, k;
};

/// Non-divergent deformational flow plus zonal mean flow; lambda' = lambda - 2 pi t / tau.
class NondivergentSphereFlow : public VelocityModel {
public:
  NondivergentSphereFlow(double radius, double tau);
  Vec3 velocity(const Vec3& x, double t) const override;
  double divergence(const Vec3& x, double t) const override;
  std::string name() const override { return "nondivergent-sphere"; }
  std::array<double, 2> components(double lon, double lat, double t) const;

  double a, tau, k;
};

/// Deformational slice flow, periodic in x with w = 0 at z = 0 and z = Hz.
class SliceDeformationFlow : public VelocityModel {
public:
  SliceDeformationFlow(double lx, double hz, double tau);
  Vec3 velocity(const Vec3& x, double t) const override;
  double divergence(const Vec3& x, double t) const override;
  std::string name() const override { return "slice-deformation"; }

  double lx, hz, tau, u0, w0;
};

/// Spatially uniform velocity. Handy for tests.
class UniformFlow : public VelocityModel {
public:
  explicit UniformFlow(Vec3 u) : u_(u) {}
  Vec3 velocity(const Vec3&, double) const override { return u_; }
  double divergence(const Vec3&, double) const override { return 0.0; }
  std::string name() const override { return "uniform"; }

private:
  Vec3 u_;
};

} // namespace ctdg
