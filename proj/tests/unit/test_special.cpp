#include <doctest.h>

#include <cmath>
#include <numbers>

#include "toeplab/errors.hpp"
#include "toeplab/fit.hpp"
#include "toeplab/special.hpp"

using namespace toeplab;

TEST_CASE("hyp2f1 matches elementary closed forms") {
  // 2F1(1, 1; 2; x) = -log(1 - x) / x
  for (double x : {0.1, 0.5, 0.9, 0.99, -0.7}) {
    const double expected = -std::log1p(-x) / x;
    CHECK(std::abs(hyp2f1(1, 1, 2, x).real() - expected) < 1e-12 * std::abs(expected));
  }
  // 2F1(a, b; b; x) = (1 - x)^-a
  for (double x : {0.3, 0.8, 0.999}) CHECK(hyp2f1(2.5, 1.3, 1.3, x).real() == doctest::Approx(std::pow(1 - x, -2.5)).epsilon(1e-11));
  // Complex argument: 2F1(1, 1; 2; z) = -log(1 - z) / z
  const std::complex<double> z(0.6, 0.5);
  const auto v = hyp2f1(1, 1, 2, z);
  const auto e = -std::log(1.0 - z) / z;
  CHECK(std::abs(v - e) < 1e-12);
}

TEST_CASE("Gauss-Legendre rules integrate polynomials exactly") {
  for (int n : {1, 5, 20}) {
    const GaussRule& g = gauss_legendre(n);
    double sum = 0.0, moment = 0.0;
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
      sum += g.weights[i];
      moment += g.weights[i] * std::pow(g.nodes[i], 2 * n - 2);
    }
    CHECK(sum == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(moment == doctest::Approx(2.0 / (2 * n - 1)).epsilon(1e-13));
  }
}

TEST_CASE("Gauss-Kronrod 15 is exact to degree 22 and its Gauss part to degree 13") {
  const KronrodRule& k = gauss_kronrod15();
  double kr = 0.0, gs = 0.0;
  for (int i = 0; i < 15; ++i) {
    kr += k.kronrod_weights[i] * std::pow(k.nodes[i], 22);
    gs += k.gauss_weights[i] * std::pow(k.nodes[i], 12);
    if (i % 2 == 0) CHECK(k.gauss_weights[i] == 0.0);
  }
  CHECK(kr == doctest::Approx(2.0 / 23).epsilon(1e-13));
  CHECK(gs == doctest::Approx(2.0 / 13).epsilon(1e-13));
}

TEST_CASE("radical inverse and primes") {
  CHECK(radical_inverse(1, 2) == 0.5);
  CHECK(radical_inverse(3, 2) == 0.75);
  CHECK(radical_inverse(5, 3) == doctest::Approx(2.0 / 3 + 1.0 / 9));
  const auto p = first_primes(6);
  CHECK(p == std::vector<unsigned>{2, 3, 5, 7, 11, 13});
}

TEST_CASE("log Pochhammer") {
  CHECK(std::exp(log_pochhammer(1.0, 4.0)) == doctest::Approx(24.0));
  CHECK(std::exp(log_pochhammer(0.5, 2.0)) == doctest::Approx(0.75));
  CHECK(log_pochhammer(3.7, 0.0) == 0.0);
}

TEST_CASE("power-law fit recovers exponent and prefactor") {
  std::vector<double> x, y;
  for (int k = 1; k <= 10; ++k) {
    x.push_back(std::ldexp(1.0, -k));
    y.push_back(3.0 * std::pow(x.back(), -1.5));
  }
  const PowerFit f = fit_power_law(x, y);
  CHECK(f.exponent == doctest::Approx(-1.5).epsilon(1e-12));
  CHECK(std::exp(f.log_prefactor) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(f.residual < 1e-12);
  CHECK(f.points == 10);
  CHECK_THROWS_AS(fit_power_law({1.0}, {1.0}), ParameterError);
  CHECK_THROWS_AS(fit_power_law({1.0, 2.0}, {0.0, -1.0}), ParameterError);
}
