#ifndef PAROSC_GRID_HPP
#define PAROSC_GRID_HPP

#include "parosc/types.hpp"

namespace parosc {

/// Uniform spatial grid in dimensionless units (hbar = m = omega(0) = 1).
/// Points are exactly x_k = x_min + k*h with h = (x_max - x_min)/(n_points - 1).
struct SpatialGrid {
  double x_min;
  double x_max;
  int n_points;

  SpatialGrid(double x_min_, double x_max_, int n_points_);

  double spacing() const { return (x_max - x_min) / (n_points - 1); }
  double point(int k) const { return x_min + k * spacing(); }
  VecX points() const;
  /// True when the grid is symmetric about the origin (up to roundoff in h).
  bool symmetric() const { return std::abs(x_min + x_max) < 1e-12 * (std::abs(x_min) + std::abs(x_max) + 1.0); }
};

bool operator==(const SpatialGrid& a, const SpatialGrid& b);

/// Complex samples of a function on a SpatialGrid.
struct GridFunction {
  SpatialGrid grid;
  VecXc values;

  GridFunction(SpatialGrid grid_, VecXc values_);
};

/// Composite-Simpson integral of the sampled function over [x_min, x_max].
/// Exact for cubics on each panel pair; an odd panel count is closed with a
/// trapezoid end-correction on the last panel.  Rejects non-finite samples.
Complex integrate_grid(const GridFunction& f);
Complex integrate_grid(const SpatialGrid& grid, const Eigen::Ref<const VecXc>& values);
double integrate_grid(const SpatialGrid& grid, const Eigen::Ref<const VecX>& values);

/// First derivative, 4th-order central stencil in the interior and 4th-order
/// one-sided stencils on the two points at each boundary.
VecXc derivative(const SpatialGrid& grid, const Eigen::Ref<const VecXc>& values);

}  // namespace parosc

#endif  // PAROSC_GRID_HPP
