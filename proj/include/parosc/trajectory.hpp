#ifndef PAROSC_TRAJECTORY_HPP
#define PAROSC_TRAJECTORY_HPP

#include <vector>

#include "parosc/types.hpp"

namespace parosc {

/// Time profile of the oscillator frequency omega(t).  Units fix omega(0) = 1,
/// so the constant profile rejects omega0 != 1 at construction.  Modulated and
/// tabulated profiles accept any real omega^2(t); keeping omega(0) = 1 there is
/// the caller's responsibility.
class FrequencyProfile {
 public:
  enum class Kind { Constant, Free, Step, Modulated, Tabulated };

  static FrequencyProfile constant(double omega0);
  static FrequencyProfile free_particle();
  /// omega = 1 for t < t_switch, omega1 afterwards.
  static FrequencyProfile step(double omega1, double t_switch = 0.0);
  /// omega^2(t) = 1 + kappa*cos(nu*t).
  static FrequencyProfile modulated(double kappa, double nu);
  /// Piecewise-linear interpolation of omega^2 between the tabulated nodes.
  static FrequencyProfile tabulated(VecX times, VecX omega_sq);

  Kind kind() const { return kind_; }
  double omega_sq(double t) const;

  double omega0() const { return p1_; }
  double omega1() const { return p1_; }
  double t_switch() const { return p2_; }
  double kappa() const { return p1_; }
  double nu() const { return p2_; }
  const VecX& table_times() const { return times_; }
  const VecX& table_omega_sq() const { return omega_sq_; }

  /// Interior points of (t0, t1) where the integrator must restart so that
  /// coefficient kinks land on segment boundaries.  Sorted in march order.
  std::vector<double> breakpoints(double t0, double t1) const;

 private:
  FrequencyProfile(Kind kind, double p1, double p2) : kind_(kind), p1_(p1), p2_(p2) {}
  Kind kind_;
  double p1_ = 0.0;
  double p2_ = 0.0;
  VecX times_;
  VecX omega_sq_;
};

/// Polar state of the mode function: eps = rho * exp(i*theta) with the exact
/// gauge theta' = 1/rho^2, so Im(eps* deps) = 1 holds identically for every
/// reconstructed point and theta is the continuously unwrapped phase.
struct ModePoint {
  double rho = 1.0;
  double drho = 0.0;
  double theta = 0.0;

  Complex eps() const { return rho * std::polar(1.0, theta); }
  Complex deps() const { return Complex(drho, 1.0 / rho) * std::polar(1.0, theta); }
};

/// Closed-form sample used as the solver oracle (constant/free/step only).
struct ReferencePoint {
  Complex eps;
  Complex deps;
  double phase;  // unwrapped arg eps
};

/// Mode function eps(t) with eps(0) = 1, deps(0) = i, sampled on a uniform
/// output mesh, plus the unwrapped phase of eps at each sample.
struct EpsilonTrajectory {
  VecX times;
  VecXc eps;
  VecXc deps;
  VecX phase;
  FrequencyProfile profile;
  double solver_tol;

  Eigen::Index size() const { return times.size(); }
};

/// Integrate the mode equation eps'' + omega^2(t) eps = 0 from the canonical
/// initial data, sampling at t = 0, dt_out, 2*dt_out, ..., t_end.
/// tol is the per-step local error target, restricted to [1e-13, 1e-6].
EpsilonTrajectory solve_epsilon(const FrequencyProfile& profile, double t_end,
                                double dt_out, double tol);

/// Advance a polar state from t0 to t1 (either direction).
ModePoint propagate(const FrequencyProfile& profile, double t0, double t1,
                    const ModePoint& start, double tol);

/// max over samples of |deps*conj(eps) - conj(deps)*eps - 2i|.
double wronskian_residual(const EpsilonTrajectory& traj);
double wronskian_defect(Complex eps, Complex deps);

/// Closed-form (eps, deps, phase) for the analytically solvable profiles.
ReferencePoint reference_epsilon(const FrequencyProfile& profile, double t);

}  // namespace parosc

#endif  // PAROSC_TRAJECTORY_HPP
