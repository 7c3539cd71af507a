#include "parosc/trajectory.hpp"

#include <algorithm>
#include <cmath>

namespace parosc {

// ---------------------------------------------------------------------------
// FrequencyProfile
// ---------------------------------------------------------------------------

FrequencyProfile FrequencyProfile::constant(double omega0) {
  if (!(omega0 > 0.0)) throw std::invalid_argument("constant profile: omega0 must be positive");
  if (std::abs(omega0 - 1.0) > 1e-12)
    throw std::invalid_argument("constant profile: omega(0) = 1 convention requires omega0 = 1");
  return FrequencyProfile(Kind::Constant, omega0, 0.0);
}

FrequencyProfile FrequencyProfile::free_particle() {
  return FrequencyProfile(Kind::Free, 0.0, 0.0);
}

FrequencyProfile FrequencyProfile::step(double omega1, double t_switch) {
  if (!(omega1 > 0.0)) throw std::invalid_argument("step profile: omega1 must be positive");
  if (!(t_switch >= 0.0) || !std::isfinite(t_switch))
    throw std::invalid_argument("step profile: t_switch must be >= 0");
  return FrequencyProfile(Kind::Step, omega1, t_switch);
}

FrequencyProfile FrequencyProfile::modulated(double kappa, double nu) {
  if (!std::isfinite(kappa) || !std::isfinite(nu))
    throw std::invalid_argument("modulated profile: parameters must be finite");
  return FrequencyProfile(Kind::Modulated, kappa, nu);
}

FrequencyProfile FrequencyProfile::tabulated(VecX times, VecX omega_sq) {
  if (times.size() != omega_sq.size() || times.size() < 2)
    throw std::invalid_argument("tabulated profile: need equal-length arrays with >= 2 nodes");
  for (Eigen::Index i = 0; i < times.size(); ++i) {
    if (!std::isfinite(times[i]) || !std::isfinite(omega_sq[i]))
      throw std::invalid_argument("tabulated profile: non-finite node");
    if (i > 0 && !(times[i] > times[i - 1]))
      throw std::invalid_argument("tabulated profile: times must be strictly increasing");
  }
  FrequencyProfile p(Kind::Tabulated, 0.0, 0.0);
  p.times_ = std::move(times);
  p.omega_sq_ = std::move(omega_sq);
  return p;
}

double FrequencyProfile::omega_sq(double t) const {
  switch (kind_) {
    case Kind::Constant:
      return p1_ * p1_;
    case Kind::Free:
      return 0.0;
    case Kind::Step:
      return t < p2_ ? 1.0 : p1_ * p1_;
    case Kind::Modulated:
      return 1.0 + p1_ * std::cos(p2_ * t);
    case Kind::Tabulated: {
      if (t < times_[0] || t > times_[times_.size() - 1])
        throw std::invalid_argument("tabulated profile queried outside its time range");
      const double* begin = times_.data();
      const double* end = begin + times_.size();
      Eigen::Index i = std::upper_bound(begin, end, t) - begin;
      if (i == 0) i = 1;
      if (i == times_.size()) i = times_.size() - 1;
      const double w = (t - times_[i - 1]) / (times_[i] - times_[i - 1]);
      return (1.0 - w) * omega_sq_[i - 1] + w * omega_sq_[i];
    }
  }
  throw std::logic_error("unreachable");
}

std::vector<double> FrequencyProfile::breakpoints(double t0, double t1) const {
  std::vector<double> pts;
  const double lo = std::min(t0, t1), hi = std::max(t0, t1);
  if (kind_ == Kind::Step) {
    if (p2_ > lo && p2_ < hi) pts.push_back(p2_);
  } else if (kind_ == Kind::Tabulated) {
    for (Eigen::Index i = 0; i < times_.size(); ++i)
      if (times_[i] > lo && times_[i] < hi) pts.push_back(times_[i]);
  }
  std::sort(pts.begin(), pts.end());
  if (t1 < t0) std::reverse(pts.begin(), pts.end());
  return pts;
}

// ---------------------------------------------------------------------------
// Dormand-Prince 5(4) with dense output on the polar system (rho, drho, theta)
// ---------------------------------------------------------------------------

namespace {

using State = Eigen::Vector3d;

constexpr double kC[7] = {0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0};
constexpr double kA2[1] = {1.0 / 5.0};
constexpr double kA3[2] = {3.0 / 40.0, 9.0 / 40.0};
constexpr double kA4[3] = {44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0};
constexpr double kA5[4] = {19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0};
constexpr double kA6[5] = {9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0,
                           -5103.0 / 18656.0};
constexpr double kB[6] = {35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0,
                          11.0 / 84.0};
constexpr double kE[7] = {71.0 / 57600.0,       0.0,          -71.0 / 16695.0, 71.0 / 1920.0,
                          -17253.0 / 339200.0, 22.0 / 525.0, -1.0 / 40.0};
// dense-output weights for the quartic continuous extension
constexpr double kD[7] = {-12715105075.0 / 11282082432.0,
                          0.0,
                          87487479700.0 / 32700410799.0,
                          -10690763975.0 / 1880347072.0,
                          701980252875.0 / 199316789632.0,
                          -1453857185.0 / 822651844.0,
                          69997945.0 / 29380423.0};

struct DenseStep {
  double t0, h;
  State r1, r2, r3, r4, r5;

  State eval(double t) const {
    const double th = (t - t0) / h;
    const double th1 = 1.0 - th;
    return r1 + th * (r2 + th1 * (r3 + th * (r4 + th1 * r5)));
  }
};

class PolarRhs {
 public:
  /// Bound to one smooth segment (a, b).  A step profile is constant inside a
  /// segment, so its value is pinned at the midpoint; stage evaluations that
  /// land exactly on the discontinuity then stay on the correct side.
  PolarRhs(const FrequencyProfile& profile, double a, double b) : profile_(&profile) {
    if (profile.kind() == FrequencyProfile::Kind::Step) {
      fixed_omega_sq_ = profile.omega_sq(0.5 * (a + b));
      fixed_ = true;
    }
  }

  State operator()(double t, const State& y) const {
    const double rho = y[0];
    if (!(rho > 0.0) || !y.allFinite())
      throw numerical_error("solve_epsilon: non-finite state during integration");
    const double inv2 = 1.0 / (rho * rho);
    State dy;
    dy[0] = y[1];
    dy[1] = -(fixed_ ? fixed_omega_sq_ : profile_->omega_sq(t)) * rho + inv2 / rho;
    dy[2] = inv2;
    return dy;
  }

 private:
  const FrequencyProfile* profile_;
  bool fixed_ = false;
  double fixed_omega_sq_ = 0.0;
};

double error_norm(const State& err, const State& y0, const State& y1, double tol) {
  double sum = 0.0;
  for (int i = 0; i < 3; ++i) {
    const double sc = tol + tol * std::max(std::abs(y0[i]), std::abs(y1[i]));
    const double e = err[i] / sc;
    sum += e * e;
  }
  return std::sqrt(sum / 3.0);
}

double initial_step(const PolarRhs& rhs, double t0, const State& y0, double dir, double tol) {
  const State f0 = rhs(t0, y0);
  const double d0 = y0.norm(), d1 = f0.norm();
  double h = (d1 > 1e-10) ? 0.01 * std::max(d0, 1.0) / d1 : 1e-6;
  h = std::min(h, 0.1);
  const State y1 = y0 + dir * h * f0;
  const State f1 = rhs(t0 + dir * h, y1);
  const double d2 = (f1 - f0).norm() / h;
  if (std::max(d1, d2) > 1e-15)
    h = std::min(h, std::pow(0.01 / std::max(d1, d2), 0.2));
  h = std::max(h, 1e-10);
  // bias small: the controller only grows by 5x per step
  return std::min(h, std::pow(tol, 0.2));
}

/// March from t0 to t1 (dir = sign(t1 - t0)); on_step receives every accepted
/// step for dense interpolation.
template <typename OnStep>
State integrate_segment(const PolarRhs& rhs, double t0, double t1, State y, double tol,
                        OnStep&& on_step) {
  if (t0 == t1) return y;
  const double dir = (t1 > t0) ? 1.0 : -1.0;
  double t = t0;
  double h = initial_step(rhs, t0, y, dir, tol);
  State k1 = rhs(t, y);
  long steps = 0;
  const long max_steps = 20'000'000;
  bool last = false;
  while (!last) {
    if (++steps > max_steps) throw numerical_error("solve_epsilon: step budget exhausted");
    if (h > std::abs(t1 - t)) {
      h = std::abs(t1 - t);
      last = true;
    }
    const double hs = dir * h;
    const State k2 = rhs(t + kC[1] * hs, y + hs * (kA2[0] * k1));
    const State k3 = rhs(t + kC[2] * hs, y + hs * (kA3[0] * k1 + kA3[1] * k2));
    const State k4 = rhs(t + kC[3] * hs, y + hs * (kA4[0] * k1 + kA4[1] * k2 + kA4[2] * k3));
    const State k5 =
        rhs(t + kC[4] * hs, y + hs * (kA5[0] * k1 + kA5[1] * k2 + kA5[2] * k3 + kA5[3] * k4));
    const State k6 = rhs(t + hs, y + hs * (kA6[0] * k1 + kA6[1] * k2 + kA6[2] * k3 +
                                           kA6[3] * k4 + kA6[4] * k5));
    const State dy = kB[0] * k1 + kB[2] * k3 + kB[3] * k4 + kB[4] * k5 + kB[5] * k6;
    const State y_new = y + hs * dy;
    const State k7 = rhs(t + hs, y_new);  // FSAL
    const State err_v = hs * (kE[0] * k1 + kE[2] * k3 + kE[3] * k4 + kE[4] * k5 + kE[5] * k6 +
                              kE[6] * k7);
    const double err = error_norm(err_v, y, y_new, tol);
    if (err <= 1.0) {
      DenseStep ds;
      ds.t0 = t;
      ds.h = hs;
      ds.r1 = y;
      ds.r2 = y_new - y;
      ds.r3 = hs * k1 - ds.r2;
      ds.r4 = ds.r2 - hs * k7 - ds.r3;
      ds.r5 = hs * (kD[0] * k1 + kD[2] * k3 + kD[3] * k4 + kD[4] * k5 + kD[5] * k6 + kD[6] * k7);
      const double t_new = last ? t1 : t + hs;
      on_step(ds, t, t_new);
      t = t_new;
      y = y_new;
      k1 = k7;
      const double fac = 0.9 * std::pow(err > 1e-12 ? 1.0 / err : 1e12, 0.2);
      h *= std::clamp(fac, 0.2, 5.0);
    } else {
      const double fac = 0.9 * std::pow(1.0 / err, 0.2);
      h *= std::clamp(fac, 0.2, 0.9);
      last = false;
    }
  }
  return y;
}

State run_piecewise(const FrequencyProfile& profile, double t0, double t1, State y, double tol,
                    const std::function<void(const DenseStep&, double, double)>& on_step) {
  PolarRhs rhs(profile);
  double seg_start = t0;
  for (double bp : profile.breakpoints(t0, t1)) {
    y = integrate_segment(rhs, seg_start, bp, y, tol, on_step);
    seg_start = bp;
  }
  return integrate_segment(rhs, seg_start, t1, y, tol, on_step);
}

void check_tol(double tol) {
  if (!(tol >= 1e-13 && tol <= 1e-6))
    throw std::invalid_argument("solver tol must lie in [1e-13, 1e-6]");
}

}  // namespace

EpsilonTrajectory solve_epsilon(const FrequencyProfile& profile, double t_end, double dt_out,
                                double tol) {
  check_tol(tol);
  if (!(t_end > 0.0)) throw std::invalid_argument("solve_epsilon: t_end must be positive");
  if (!(dt_out > 0.0)) throw std::invalid_argument("solve_epsilon: dt_out must be positive");

  std::vector<double> mesh;
  for (long k = 0;; ++k) {
    const double t = k * dt_out;
    if (t >= t_end - 1e-9 * dt_out) break;
    mesh.push_back(t);
  }
  mesh.push_back(t_end);

  const Eigen::Index n = static_cast<Eigen::Index>(mesh.size());
  EpsilonTrajectory traj{VecX(n), VecXc(n), VecXc(n), VecX(n), profile, tol};
  for (Eigen::Index i = 0; i < n; ++i) traj.times[i] = mesh[i];

  auto record = [&](Eigen::Index i, const ModePoint& mp) {
    traj.eps[i] = mp.eps();
    traj.deps[i] = mp.deps();
    traj.phase[i] = mp.theta;
  };
  record(0, ModePoint{});  // eps(0) = 1, deps(0) = i exactly

  Eigen::Index next = 1;
  State y0;
  y0 << 1.0, 0.0, 0.0;
  auto on_step = [&](const DenseStep& ds, double /*t_prev*/, double t_now) {
    while (next < n && traj.times[next] <= t_now + 1e-14 * (1.0 + std::abs(t_now))) {
      const State yi = ds.eval(std::min(traj.times[next], t_now));
      record(next, ModePoint{yi[0], yi[1], yi[2]});
      ++next;
    }
  };
  State y_end = run_piecewise(profile, 0.0, t_end, y0, tol, on_step);
  if (next == n) {
    // final sample refreshed with the marched (not interpolated) state
    record(n - 1, ModePoint{y_end[0], y_end[1], y_end[2]});
  } else {
    record(next, ModePoint{y_end[0], y_end[1], y_end[2]});
    if (++next != n) throw std::logic_error("solve_epsilon: output mesh not exhausted");
  }
  return traj;
}

ModePoint propagate(const FrequencyProfile& profile, double t0, double t1,
                    const ModePoint& start, double tol) {
  check_tol(tol);
  State y;
  y << start.rho, start.drho, start.theta;
  State y1 = run_piecewise(profile, t0, t1, y, tol, [](const DenseStep&, double, double) {});
  return ModePoint{y1[0], y1[1], y1[2]};
}

double wronskian_defect(Complex eps, Complex deps) {
  return std::abs(deps * std::conj(eps) - std::conj(deps) * eps - Complex(0.0, 2.0));
}

double wronskian_residual(const EpsilonTrajectory& traj) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < traj.size(); ++i)
    worst = std::max(worst, wronskian_defect(traj.eps[i], traj.deps[i]));
  return worst;
}

namespace {

/// Unwrapped polar angle of the ellipse (cos(psi), sin(psi)/w), continuous in psi.
double ellipse_angle(double psi, double w) {
  const double m = std::round(psi / kPi);
  const double delta = psi - m * kPi;
  return m * kPi + std::atan(std::tan(delta) / w);
}

}  // namespace

ReferencePoint reference_epsilon(const FrequencyProfile& profile, double t) {
  switch (profile.kind()) {
    case FrequencyProfile::Kind::Constant: {
      const double w = profile.omega0();
      Complex eps(std::cos(w * t), std::sin(w * t) / w);
      Complex deps(-w * std::sin(w * t), std::cos(w * t));
      return ReferencePoint{eps, deps, ellipse_angle(w * t, w)};
    }
    case FrequencyProfile::Kind::Free:
      return ReferencePoint{Complex(1.0, t), Complex(0.0, 1.0), std::atan(t)};
    case FrequencyProfile::Kind::Step: {
      const double ts = profile.t_switch();
      if (t < ts) {
        return ReferencePoint{std::polar(1.0, t), Complex(0.0, 1.0) * std::polar(1.0, t), t};
      }
      const double w = profile.omega1();
      const double tau = t - ts;
      const Complex rot = std::polar(1.0, ts);  // eps(ts) = e^{i ts}, deps(ts) = i e^{i ts}
      Complex eps = rot * Complex(std::cos(w * tau), std::sin(w * tau) / w);
      Complex deps = rot * Complex(-w * std::sin(w * tau), std::cos(w * tau));
      return ReferencePoint{eps, deps, ts + ellipse_angle(w * tau, w)};
    }
    default:
      throw std::invalid_argument("reference_epsilon: no closed form for this profile kind");
  }
}

}  // namespace parosc
