#include "parosc/grid.hpp"

#include <cmath>

namespace parosc {

SpatialGrid::SpatialGrid(double x_min_, double x_max_, int n_points_)
    : x_min(x_min_), x_max(x_max_), n_points(n_points_) {
  if (!(std::isfinite(x_min) && std::isfinite(x_max)))
    throw std::invalid_argument("SpatialGrid: bounds must be finite");
  if (!(x_min < x_max)) throw std::invalid_argument("SpatialGrid: requires x_min < x_max");
  if (n_points < 16) throw std::invalid_argument("SpatialGrid: requires n_points >= 16");
}

VecX SpatialGrid::points() const {
  VecX x(n_points);
  for (int k = 0; k < n_points; ++k) x[k] = point(k);
  return x;
}

bool operator==(const SpatialGrid& a, const SpatialGrid& b) {
  return a.x_min == b.x_min && a.x_max == b.x_max && a.n_points == b.n_points;
}

GridFunction::GridFunction(SpatialGrid grid_, VecXc values_)
    : grid(grid_), values(std::move(values_)) {
  if (values.size() != grid.n_points)
    throw std::invalid_argument("GridFunction: values length must equal grid n_points");
}

namespace {

template <typename Vec, typename Scalar>
Scalar simpson(const SpatialGrid& grid, const Vec& values) {
  for (Eigen::Index k = 0; k < values.size(); ++k) {
    if (!std::isfinite(std::abs(values[k])))
      throw std::invalid_argument("integrate_grid: non-finite sample");
  }
  const double h = grid.spacing();
  const int n = grid.n_points;
  int panels = n - 1;
  Scalar total{};
  int last = panels;  // index one past the Simpson range
  if (panels % 2 != 0) {
    // close the final panel with a trapezoid; callers keep tails negligible there
    total += (values[n - 2] + values[n - 1]) * (h / 2.0);
    last = panels - 1;
  }
  Scalar odd{}, even{};
  for (int k = 1; k < last; k += 2) odd += values[k];
  for (int k = 2; k < last; k += 2) even += values[k];
  total += (values[0] + values[last] + 4.0 * odd + 2.0 * even) * (h / 3.0);
  return total;
}

}  // namespace

Complex integrate_grid(const GridFunction& f) { return integrate_grid(f.grid, f.values); }

Complex integrate_grid(const SpatialGrid& grid, const Eigen::Ref<const VecXc>& values) {
  if (values.size() != grid.n_points)
    throw std::invalid_argument("integrate_grid: values length must equal grid n_points");
  return simpson<Eigen::Ref<const VecXc>, Complex>(grid, values);
}

double integrate_grid(const SpatialGrid& grid, const Eigen::Ref<const VecX>& values) {
  if (values.size() != grid.n_points)
    throw std::invalid_argument("integrate_grid: values length must equal grid n_points");
  return simpson<Eigen::Ref<const VecX>, double>(grid, values);
}

VecXc derivative(const SpatialGrid& grid, const Eigen::Ref<const VecXc>& values) {
  if (values.size() != grid.n_points)
    throw std::invalid_argument("derivative: values length must equal grid n_points");
  const int n = grid.n_points;
  const double h = grid.spacing();
  VecXc d(n);
  auto f = [&](int k) { return values[k]; };
  // one-sided 4th-order stencils at the edges
  d[0] = (-25.0 * f(0) + 48.0 * f(1) - 36.0 * f(2) + 16.0 * f(3) - 3.0 * f(4)) / (12.0 * h);
  d[1] = (-3.0 * f(0) - 10.0 * f(1) + 18.0 * f(2) - 6.0 * f(3) + f(4)) / (12.0 * h);
  d[n - 2] = (3.0 * f(n - 1) + 10.0 * f(n - 2) - 18.0 * f(n - 3) + 6.0 * f(n - 4) - f(n - 5)) / (12.0 * h);
  d[n - 1] = (25.0 * f(n - 1) - 48.0 * f(n - 2) + 36.0 * f(n - 3) - 16.0 * f(n - 4) + 3.0 * f(n - 5)) / (12.0 * h);
  for (int k = 2; k < n - 2; ++k) {
    d[k] = (-f(k + 2) + 8.0 * f(k + 1) - 8.0 * f(k - 1) + f(k - 2)) / (12.0 * h);
  }
  return d;
}

}  // namespace parosc
