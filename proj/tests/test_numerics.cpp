#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "parosc/grid.hpp"
#include "parosc/quadrature.hpp"

using namespace parosc;

namespace {

GridFunction sample(const SpatialGrid& g, const std::function<Complex(double)>& f) {
  VecXc v(g.n_points);
  for (int k = 0; k < g.n_points; ++k) v[k] = f(g.point(k));
  return GridFunction(g, v);
}

}  // namespace

TEST_CASE("grid construction and invariants") {
  SpatialGrid g(-8.0, 8.0, 2049);
  CHECK(g.spacing() == doctest::Approx(16.0 / 2048).epsilon(1e-15));
  CHECK(g.point(0) == -8.0);
  CHECK(g.point(2048) == doctest::Approx(8.0).epsilon(1e-15));
  CHECK(g.symmetric());

  CHECK_THROWS_AS(SpatialGrid(1.0, -1.0, 64), std::invalid_argument);
  CHECK_THROWS_AS(SpatialGrid(-1.0, 1.0, 15), std::invalid_argument);
  CHECK_THROWS_AS(GridFunction(g, VecXc::Zero(7)), std::invalid_argument);
}

TEST_CASE("integrate_grid: Gaussian reaches sqrt(pi) to 1e-10") {
  SpatialGrid g(-8.0, 8.0, 2049);
  auto f = sample(g, [](double x) { return Complex(std::exp(-x * x), 0.0); });
  Complex val = integrate_grid(f);
  CHECK(std::abs(val.real() - std::sqrt(kPi)) < 1e-10);
  CHECK(std::abs(val.imag()) < 1e-15);
}

TEST_CASE("integrate_grid: zero and odd integrands") {
  SpatialGrid g(-6.0, 6.0, 513);
  auto zero = sample(g, [](double) { return Complex(0.0, 0.0); });
  CHECK(std::abs(integrate_grid(zero)) == 0.0);

  auto odd = sample(g, [](double x) { return Complex(x * std::exp(-x * x), 0.0); });
  CHECK(std::abs(integrate_grid(odd)) < 1e-12);
}

TEST_CASE("integrate_grid: exact for cubics on paired panels") {
  SpatialGrid g(0.0, 1.0, 17);  // 16 panels, even
  auto cubic = sample(g, [](double x) { return Complex(x * x * x - 2.0 * x + 0.5, 0.0); });
  // antiderivative: x^4/4 - x^2 + x/2 over [0,1] -> 1/4 - 1 + 1/2 = -1/4
  CHECK(integrate_grid(cubic).real() == doctest::Approx(-0.25).epsilon(1e-14));
}

TEST_CASE("integrate_grid: odd panel count uses trapezoid end-correction") {
  SpatialGrid g(-8.0, 8.0, 2048);  // 2047 panels
  auto f = sample(g, [](double x) { return Complex(std::exp(-x * x), 0.0); });
  // last panel carries a ~1e-28 tail, so accuracy survives the correction
  CHECK(std::abs(integrate_grid(f).real() - std::sqrt(kPi)) < 1e-10);
}

TEST_CASE("integrate_grid rejects non-finite input") {
  SpatialGrid g(-1.0, 1.0, 33);
  VecXc v = VecXc::Zero(33);
  v[10] = Complex(std::numeric_limits<double>::quiet_NaN(), 0.0);
  CHECK_THROWS_AS(integrate_grid(g, v), std::invalid_argument);
}

TEST_CASE("integrate_grid linearity to machine precision") {
  SpatialGrid g(-7.0, 7.0, 801);
  auto f = sample(g, [](double x) { return Complex(std::exp(-x * x), std::sin(x)); });
  auto h = sample(g, [](double x) { return Complex(std::cos(x) * std::exp(-0.5 * x * x), x); });
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> U(-2.0, 2.0);
  for (int trial = 0; trial < 20; ++trial) {
    Complex a(U(rng), U(rng)), b(U(rng), U(rng));
    GridFunction combo(g, a * f.values + b * h.values);
    Complex lhs = integrate_grid(combo);
    Complex rhs = a * integrate_grid(f) + b * integrate_grid(h);
    CHECK(std::abs(lhs - rhs) < 1e-13 * (1.0 + std::abs(rhs)));
  }
}

TEST_CASE("integrate_grid refinement: error falls by >= 8x per doubling") {
  // truncated Gaussian with non-vanishing boundary derivatives -> genuine h^4
  const double exact = std::sqrt(kPi) * std::erf(2.0);
  double prev_err = -1.0;
  for (int n : {33, 65, 129, 257, 513}) {
    SpatialGrid g(-2.0, 2.0, n);
    auto f = sample(g, [](double x) { return Complex(std::exp(-x * x), 0.0); });
    double err = std::abs(integrate_grid(f).real() - exact);
    if (prev_err > 0.0 && prev_err > 1e-12) CHECK(err < prev_err / 8.0);
    prev_err = err;
  }
}

TEST_CASE("quad_adaptive: 1-D Gaussians") {
  auto gauss = [](double x) { return Complex(std::exp(-x * x), 0.0); };
  QuadResult r = quad_adaptive(gauss, -8.0, 8.0, 1e-10);
  CHECK(r.converged);
  CHECK(std::abs(r.value.real() - std::sqrt(kPi)) < 1e-10);

  // completed square: exp(-2x^2 + x) -> sqrt(pi/2) exp(1/8)
  auto shifted = [](double x) { return Complex(std::exp(-2.0 * x * x + x), 0.0); };
  QuadResult s = quad_adaptive(shifted, -8.0, 8.0, 1e-9);
  CHECK(s.converged);
  CHECK(std::abs(s.value.real() - std::sqrt(kPi / 2.0) * std::exp(0.125)) < 1e-8);
}

TEST_CASE("quad_nd: product Gaussian over the plane") {
  VecX lo(2), hi(2);
  lo << -8.0, -8.0;
  hi << 8.0, 8.0;
  auto f = [](const VecX& x) { return Complex(std::exp(-x[0] * x[0] - x[1] * x[1]), 0.0); };
  QuadResult r = quad_nd(f, lo, hi, 1e-8);
  CHECK(r.converged);
  CHECK(std::abs(r.value.real() - kPi) < 1e-8);
}

TEST_CASE("quad_nd: Hermite orthogonality constant 2^n n! sqrt(pi)") {
  VecX lo(1), hi(1);
  lo << -8.0;
  hi << 8.0;
  auto f = [](const VecX& x) {
    double h2 = 4.0 * x[0] * x[0] - 2.0;
    return Complex(h2 * h2 * std::exp(-x[0] * x[0]), 0.0);
  };
  QuadResult r = quad_nd(f, lo, hi, 1e-8);
  CHECK(r.converged);
  CHECK(std::abs(r.value.real() - 8.0 * std::sqrt(kPi)) < 1e-8);
}

TEST_CASE("quad_nd agrees with integrate_grid on shared integrands") {
  SpatialGrid g(-8.0, 8.0, 4097);
  for (auto f : {+[](double x) { return Complex(std::exp(-x * x), 0.0); },
                 +[](double x) { return Complex(std::exp(-2.0 * x * x + x), 0.0); },
                 +[](double x) { return Complex(std::cos(x) * std::exp(-x * x / 2.0), 0.0); }}) {
    VecX lo(1), hi(1);
    lo << -8.0;
    hi << 8.0;
    QuadResult q = quad_nd([&](const VecX& x) { return f(x[0]); }, lo, hi, 1e-10);
    Complex s = integrate_grid(sample(g, f));
    CHECK(q.converged);
    CHECK(std::abs(q.value - s) < 1e-9);
  }
}

TEST_CASE("quad_adaptive reports non-convergence with best estimate") {
  // |x|^(-1/2)-type spike forces the subdivision budget with a tiny budget
  auto spiky = [](double x) { return Complex(1.0 / std::sqrt(std::abs(x) + 1e-14), 0.0); };
  QuadResult r = quad_adaptive(spiky, -1.0, 1.0, 1e-14, 8);
  CHECK(!r.converged);
  CHECK(r.error > 1e-14);
  CHECK_THROWS_AS(r.checked("test"), numerical_error);
}
