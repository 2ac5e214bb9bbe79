#include <doctest.h>

#include <cmath>
#include <numbers>

#include "toeplab/errors.hpp"
#include "toeplab/kernels.hpp"
#include "toeplab/quadrature.hpp"

using namespace toeplab;
using std::numbers::pi;

TEST_CASE("polar rule integrates constants and radial weights") {
  const ModelDomain d(1);
  const QuadratureRule rule = polar_rule(d);
  const Estimate area = integrate(rule, [](const Point&) { return 1.0; });
  CHECK(std::abs(area.value - pi) < 1e-10);
  CHECK(area.error < 1e-8);
  CHECK(integrate(rule, [](const Point&) { return 1.0; }, 1.0).value == doctest::Approx(pi / 2).epsilon(1e-12));
  CHECK(integrate(rule, [](const Point& z) { return z.norm_sq(); }).value == doctest::Approx(pi / 2).epsilon(1e-10));
}

TEST_CASE("the reproducing property holds for |K(., z)|^2") {
  const ModelDomain d(1);
  const KernelParams kp(1, 0.0);
  const Point z(0.9);
  PolarRuleOptions o;
  o.focus = {z};
  const QuadratureRule rule = polar_rule(d, o);
  const Estimate e = integrate(rule, [&](const Point& w) { return std::norm(bergman_kernel(kp, w, z)); });
  CHECK(e.value == doctest::Approx(1.0 / (pi * 0.19 * 0.19)).epsilon(1e-9));
}

TEST_CASE("quasi Monte Carlo and Monte Carlo rules carry replica errors") {
  for (int n : {1, 2, 3}) {
    const ModelDomain d(n);
    const QuadratureRule q = qmc_rule(d, 4096, 8, 3);
    CHECK(q.size() == 4096 * 8);
    const Estimate v = integrate(q, [](const Point&) { return 1.0; });
    CHECK(std::abs(v.value - d.volume()) < 1e-3 * d.volume());
    const QuadratureRule m = monte_carlo_rule(d, 20000, 4, 5);
    const Estimate mv = integrate(m, [](const Point& z) { return z.norm_sq(); });
    const double exact = d.volume() * n / (n + 1.0);
    CHECK(std::abs(mv.value - exact) < 4.0 * mv.error);
  }
}

TEST_CASE("Monte Carlo oracle is within three standard errors") {
  const ModelDomain d(1);
  const Estimate one = monte_carlo_oracle(d, [](const Point&) { return 1.0; }, 0.0, 100000, 1);
  CHECK(std::abs(one.value - pi) <= 3.0 * one.error + 1e-12);
  const Estimate r2 = monte_carlo_oracle(d, [](const Point& z) { return z.norm_sq(); }, 0.0, 400000, 2);
  CHECK(std::abs(r2.value - pi / 2) <= 3.0 * r2.error);
  const KobayashiBall b(Point(0.9), 0.5);
  const Estimate ball = monte_carlo_oracle(d, [&](const Point& z) { return b.contains(z) ? 1.0 : 0.0; }, 0.0, 1000000, 3);
  CHECK(std::abs(ball.value - 0.0445796) <= 3.0 * ball.error);
}

TEST_CASE("Monte Carlo oracle does not depend on the thread count") {
  const ModelDomain d(2);
  auto f = [](const Point& z) { return std::norm(z[0]) + 0.5 * std::norm(z[1]); };
  const Estimate a = monte_carlo_oracle(d, f, 0.5, 300000, 11);
  const Estimate b = monte_carlo_oracle(d, f, 0.5, 300000, 11);
  CHECK(a.value == b.value);
  CHECK(a.error == b.error);
}

TEST_CASE("integration rejects bad weights and non-finite integrands") {
  const QuadratureRule rule = polar_rule(ModelDomain(1));
  CHECK_THROWS_AS(integrate(rule, [](const Point&) { return 1.0; }, -1.0), ParameterError);
  CHECK_THROWS_AS(integrate(rule, [](const Point&) { return NAN; }), EvaluationError);
  CHECK_THROWS_AS(polar_rule(ModelDomain(2)), ParameterError);
}
