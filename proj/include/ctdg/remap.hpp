#pragma once

#include <optional>

#include "ctdg/space.hpp"

namespace ctdg {

/// Galerkin projection: int psi q^M = int psi q for all psi in the target.
Field galerkin_project(const Field& q, const SpacePtr& target);

/// Projection of the pointwise product a*b into the target space.
Field project_product(const Field& a, const Field& b, const SpacePtr& target);

/// Solves int psi rho_target m^M = int psi rho_orig m for psi in the target.
Field conservative_project(const Field& m, const Field& rho_orig, const Field& rho_target, const SpacePtr& target);

/// int m / int 1 over the domain.
double global_mean(const Field& m);

/// Shifted form of conservative_project that maps constants to themselves:
/// int psi rho_target (m^M - c) = int psi rho_orig (m - c), with c the global
/// mean of m unless given.
Field consistent_conservative_project(const Field& m, const Field& rho_orig, const Field& rho_target,
                                      const SpacePtr& target, std::optional<double> mean = std::nullopt);

/// Averaging recovery into a continuous space: each node takes the mean of the
/// source evaluated in every incident cell. On the slice, when the source is
/// discontinuous in the vertical, top and bottom nodes are instead extrapolated
/// linearly from the two rows above (below) them.
Field recover_average(const Field& q, const SpacePtr& target);

/// Exact nodal embedding into a fully discontinuous space containing the source.
Field inject(const Field& q, const SpacePtr& target);

/// Weighted cellwise solve into a fully discontinuous space:
/// int psi rho_hat m^ = int psi rho_orig m.
Field conservative_inject(const Field& m, const Field& rho_orig, const Field& rho_hat, const SpacePtr& target);

/// Recovery of a lowest-order field into the transport space, with the mass
/// correction q - P(R q) injected alongside. Preserves the integral.
Field recovery(const Field& q, const SpacePtr& continuous, const SpacePtr& transport);

/// Mass-conserving recovery of a mixing ratio. rho_orig is the density in its
/// original space, rho_rec its recovery in the transport space. The shift
/// defaults to the global mean of m; projecting back with the same shift
/// undoes the recovery exactly.
Field conservative_recovery(const Field& m, const Field& rho_orig, const Field& rho_rec, const SpacePtr& continuous,
                            std::optional<double> mean = std::nullopt);

} // namespace ctdg
