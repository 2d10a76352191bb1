#pragma once

#include <span>

#include "ctdg/space.hpp"

namespace ctdg {

struct LimiterStats {
  int limited_cells = 0;
  int unfixable_cells = 0;

  LimiterStats& operator+=(const LimiterStats& o)
  {
    limited_cells += o.limited_cells;
    unfixable_cells += o.unfixable_cells;
    return *this;
  }
};

/// Cell values of the density-weighted mean mixing ratio, shifted by the global
/// mean so that a constant m gives back the same constant.
std::vector<double> mean_mixing_ratio_values(const Field& m, const Field& rho);
/// The same values as a field on the given piecewise-constant space.
Field mean_mixing_ratio(const Field& m, const Field& rho, const SpacePtr& dq0);

/// lambda = -m_min / (mbar - m_min) when the smallest vertex value is negative,
/// clamped to [0, 1]; zero otherwise. Sets `unfixable` when mbar < 0.
double blending_coefficient(std::span<const double> vertex_values, double mbar, bool* unfixable = nullptr);

/// Per cell: (1 - lambda) m + lambda mbar. mbar and lambda are cellwise constant.
Field blend(const Field& m, const Field& mbar, const Field& lambda);

/// Mean-mixing-ratio limiter for order-1 fully discontinuous fields. Unfixable
/// cells are counted and left untouched.
Field apply_mmr_limiter(const Field& m, const Field& rho, LimiterStats* stats = nullptr);

/// Baseline: scale deviations from each cell's mean until every vertex value is
/// non-negative. Cells with negative mean are clipped to zero and counted.
Field positive_definite_vertex_limiter(const Field& m, LimiterStats* stats = nullptr);

} // namespace ctdg
