#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "toeplab/errors.hpp"
#include "toeplab/fit.hpp"
#include "toeplab/kernels.hpp"
#include "toeplab/quadrature.hpp"

using namespace toeplab;
using std::numbers::pi;

namespace {

QuadratureRule focused(const Point& z, int extra = 28) {
  PolarRuleOptions o;
  o.focus = {z};
  o.radial_levels = static_cast<int>(std::ceil(std::log2(1.0 / (1.0 - z.norm())))) + extra;
  return polar_rule(ModelDomain(1), o);
}

}  // namespace

TEST_CASE("kernel constants") {
  CHECK(KernelParams(1, 0.0).constant == doctest::Approx(1.0 / pi).epsilon(1e-12));
  CHECK(KernelParams(1, 1.0).constant == doctest::Approx(2.0 / pi).epsilon(1e-12));
  CHECK(bergman_kernel(KernelParams(1, 0.0), Point(0.0), Point(0.0)).real() == doctest::Approx(0.318310).epsilon(1e-6));
  for (int n : {1, 2, 3})
    for (double beta : {0.0, 0.5, 2.0})
      CHECK(kernel_constant_numeric(n, beta) == doctest::Approx(kernel_constant_closed_form(n, beta)).epsilon(1e-8));
}

TEST_CASE("kernels are Hermitian symmetric") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-0.6, 0.6);
  for (int n : {1, 2}) {
    const KernelParams kp(n, 0.7);
    for (int i = 0; i < 20; ++i) {
      std::vector<cplx> a(n), b(n);
      for (int k = 0; k < n; ++k) a[k] = cplx(u(rng), u(rng)) / std::sqrt(2.0 * n), b[k] = cplx(u(rng), u(rng)) / std::sqrt(2.0 * n);
      const cplx x = bergman_kernel(kp, Point(a), Point(b));
      const cplx y = bergman_kernel(kp, Point(b), Point(a));
      CHECK(std::abs(x - std::conj(y)) < 1e-12 * std::abs(x));
    }
  }
}

TEST_CASE("normalized kernel at the origin is constant") {
  const KernelParams kp(1, 0.0);
  CHECK(normalized_kernel(kp, Point(0.0), Point(cplx(0.3, 0.4))).real() == doctest::Approx(1.0 / std::sqrt(pi)));
  CHECK(std::abs(normalized_kernel(kp, Point(0.0), Point(0.7)).imag()) < 1e-15);
}

TEST_CASE("kernel integral estimates") {
  const KernelParams kp(1, 0.0);
  const Point z(0.9);
  const Estimate e = kernel_integral_estimate(kp, z, 2.0, 0.0, focused(z));
  CHECK(e.value == doctest::Approx(1.0 / (pi * 0.19 * 0.19)).epsilon(1e-8));
  const Estimate origin = kernel_integral_estimate(KernelParams(1, 1.0), Point(0.0), 3.0, 0.5, focused(Point(0.0)));
  CHECK(origin.value > 0.0);
  CHECK(std::isfinite(origin.value));
  // Slope alpha - beta - (n + beta + 1)(p - 1) = -1 for p = 2, alpha = 1, beta = 0.
  std::vector<double> xs, ys;
  for (double delta : {1e-3, 3e-3, 1e-2, 3e-2, 1e-1}) {
    const Point a(std::sqrt(1.0 - delta));
    xs.push_back(delta);
    ys.push_back(kernel_integral_estimate(kp, a, 2.0, 1.0, focused(a)).value);
  }
  CHECK(fit_power_law(xs, ys).exponent == doctest::Approx(-1.0).epsilon(0.05));
  CHECK_THROWS_AS(kernel_integral_estimate(kp, z, 2.0, 5.0, focused(z)), ParameterError);
}

TEST_CASE("kernel power integral closed form against quadrature") {
  for (double a : {0.0, 0.5, 0.95})
    for (double sigma : {1.0, 2.5})
      for (double alpha : {0.0, 1.5}) {
        const Point pa(a);
        const double q = integrate(focused(pa), [&](const Point& w) { return std::pow(std::abs(1.0 - w[0] * a), -2.0 * sigma); }, alpha).value;
        CHECK(kernel_power_integral(1, sigma, alpha, a * a) == doctest::Approx(q).epsilon(1e-8));
      }
}

TEST_CASE("Bergman projection reproduces holomorphic functions and kills conjugates") {
  for (double beta : {0.0, 1.0, 2.5}) {
    const KernelParams kp(1, beta);
    const Point z(0.5);
    CHECK(std::abs(bergman_project(kp, [](const Point&) { return cplx(1.0); }, z, focused(z)).value - 1.0) < 1e-6);
  }
  const KernelParams kp(1, 0.0);
  const Point z(cplx(0.3, 0.2));
  const cplx got = bergman_project(kp, [](const Point& w) { return w[0] * w[0]; }, z, focused(z)).value;
  CHECK(std::abs(got - z[0] * z[0]) < 1e-6);
  const cplx anti = bergman_project(kp, [](const Point& w) { return std::conj(w[0]); }, Point(0.0), focused(Point(0.0))).value;
  CHECK(std::abs(anti) < 1e-10);
}

TEST_CASE("duality pairing and norms") {
  const QuadratureRule rule = polar_rule(ModelDomain(1));
  auto z1 = [](const Point& w) { return w[0]; };
  auto z2 = [](const Point& w) { return w[0] * w[0]; };
  CHECK(std::abs(duality_pairing(z1, z2, 0.0, rule).value) < 1e-8);
  // (z, z)_0 = pi / 2.
  CHECK(duality_pairing(z1, z1, 0.0, rule).value.real() == doctest::Approx(pi / 2).epsilon(1e-10));
  const DualSpaces ds{SpaceParams(2.0, 1.0), 1.0};
  CHECK(ds.conjugate_exponent() == doctest::Approx(2.0));
  CHECK(ds.beta() == doctest::Approx(1.0));
  CHECK_THROWS_AS((DualSpaces{SpaceParams(1.0, 0.0), 0.0}.conjugate_exponent()), ParameterError);
  CHECK(norm([](const Point&) { return cplx(1.0); }, SpaceParams(2.0, 0.0), rule).value == doctest::Approx(std::sqrt(pi)).epsilon(1e-10));
}

TEST_CASE("kernel norms scale with the predicted boundary exponent") {
  const double p = 2.0, alpha = 0.5, beta = 1.0;
  const KernelParams kp(1, beta);
  std::vector<double> xs, ys;
  for (double delta : {1e-3, 3e-3, 1e-2, 3e-2, 1e-1}) {
    const Point a(std::sqrt(1.0 - delta));
    xs.push_back(delta);
    const double nv = norm([&](const Point& w) { return bergman_kernel(kp, w, a); }, SpaceParams(p, alpha), focused(a)).value;
    ys.push_back(std::pow(nv, p));
  }
  CHECK(fit_power_law(xs, ys).exponent == doctest::Approx(2.0 + alpha - (2.0 + beta) * p).epsilon(0.05 / 3.5));
}
