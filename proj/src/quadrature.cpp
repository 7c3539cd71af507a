#include "parosc/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <sstream>
#include <vector>

namespace parosc {

namespace {

// 15-point Kronrod extension of 7-point Gauss (QUADPACK qk15 nodes/weights).
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b;
  Complex value;
  double error;
  bool operator<(const Segment& other) const { return error < other.error; }
};

Segment gk15(const std::function<Complex(double)>& f, double a, double b, long& evals) {
  const double c = 0.5 * (a + b);
  const double hw = 0.5 * (b - a);
  Complex kron{0.0, 0.0}, gauss{0.0, 0.0};
  for (int j = 0; j < 8; ++j) {
    const double dx = hw * kXgk[j];
    Complex fsum;
    if (j == 7) {
      fsum = f(c);
      ++evals;
    } else {
      fsum = f(c - dx) + f(c + dx);
      evals += 2;
    }
    kron += kWgk[j] * fsum;
    if (j == 7)
      gauss += kWg[3] * fsum;  // center node
    else if (j % 2 == 1)
      gauss += kWg[j / 2] * fsum;  // j = 1,3,5 -> paired Gauss nodes
  }
  kron *= hw;
  gauss *= hw;
  if (!std::isfinite(std::abs(kron)))
    throw std::invalid_argument("quad_adaptive: non-finite integrand value");
  // conservative: raw |K15 - G7| difference, no smoothness sharpening
  return Segment{a, b, kron, std::abs(kron - gauss)};
}

}  // namespace

Complex QuadResult::checked(const char* what) const {
  if (converged) return value;
  std::ostringstream msg;
  msg << what << ": failed to converge; best estimate (" << value.real() << ", "
      << value.imag() << ") with error bound " << error;
  throw numerical_error(msg.str());
}

QuadResult quad_adaptive(const std::function<Complex(double)>& f, double a, double b,
                         double tol, int max_intervals) {
  if (!(tol > 0.0)) throw std::invalid_argument("quad_adaptive: tol must be positive");
  if (!(a < b)) throw std::invalid_argument("quad_adaptive: requires a < b");
  QuadResult result;
  std::priority_queue<Segment> queue;
  queue.push(gk15(f, a, b, result.evaluations));
  Complex total = queue.top().value;
  double total_err = queue.top().error;
  int intervals = 1;
  while (total_err > tol && intervals < max_intervals) {
    Segment worst = queue.top();
    queue.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) {  // interval width at roundoff floor
      queue.push(worst);
      break;
    }
    Segment left = gk15(f, worst.a, mid, result.evaluations);
    Segment right = gk15(f, mid, worst.b, result.evaluations);
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    queue.push(left);
    queue.push(right);
    ++intervals;
  }
  result.value = total;
  result.error = total_err;
  result.converged = total_err <= tol;
  return result;
}

QuadResult quad_nd(const std::function<Complex(const VecX&)>& f, const VecX& lo,
                   const VecX& hi, double tol) {
  const Eigen::Index n = lo.size();
  if (n != hi.size()) throw std::invalid_argument("quad_nd: bound dimensions differ");
  if (n != 1 && n != 2) throw std::invalid_argument("quad_nd: N must be 1 or 2");
  for (Eigen::Index i = 0; i < n; ++i)
    if (!(lo[i] < hi[i])) throw std::invalid_argument("quad_nd: requires lo < hi per axis");
  if (!(tol > 0.0)) throw std::invalid_argument("quad_nd: tol must be positive");

  if (n == 1) {
    VecX x(1);
    auto f1 = [&](double t) {
      x[0] = t;
      return f(x);
    };
    return quad_adaptive(f1, lo[0], hi[0], tol);
  }

  // Nested rule: the outer integral absorbs tol/2, the inner calls keep their
  // integrated contribution below tol/4.
  const double width = hi[0] - lo[0];
  const double inner_tol = tol / (4.0 * width);
  bool inner_ok = true;
  long inner_evals = 0;
  auto outer_f = [&](double t) {
    auto f1 = [&](double u) {
      VecX x(2);
      x[0] = t;
      x[1] = u;
      return f(x);
    };
    QuadResult inner = quad_adaptive(f1, lo[1], hi[1], inner_tol);
    inner_ok = inner_ok && inner.converged;
    inner_evals += inner.evaluations;
    return inner.value;
  };
  QuadResult outer = quad_adaptive(outer_f, lo[0], hi[0], tol / 2.0);
  QuadResult result;
  result.value = outer.value;
  result.error = outer.error + tol / 4.0;
  result.converged = outer.converged && inner_ok;
  result.evaluations = inner_evals;
  return result;
}

}  // namespace parosc
