#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "toeplab/errors.hpp"
#include "toeplab/kernels.hpp"
#include "toeplab/quadrature.hpp"
#include "toeplab/toeplitz.hpp"

using namespace toeplab;
using std::numbers::pi;

namespace {

const ModelDomain disk(1);

Measure random_atoms(int n, std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Point> pts;
  std::vector<double> w;
  for (std::size_t i = 0; i < count; ++i) {
    std::vector<cplx> c(n);
    for (auto& x : c) x = cplx(g(rng), g(rng));
    pts.push_back(along(Point(c), 0.95 * std::sqrt(u(rng))));
    w.push_back(0.1 + u(rng));
  }
  return Measure::atomic(ModelDomain(n), pts, w);
}

}  // namespace

TEST_CASE("parameter map") {
  const OperatorParams a = derive_params(1, 2, 0, 2, 0, 1);
  CHECK(a.lambda == doctest::Approx(1.0));
  CHECK(a.gamma == doctest::Approx(1.0));
  CHECK(a.hypothesis());
  const OperatorParams b = derive_params(1, 2, 1, 3, 2, 1);
  CHECK(b.lambda == doctest::Approx(7.0 / 6.0));
  CHECK(b.gamma == doctest::Approx(5.0 / 7.0));
  for (int n : {1, 2, 3})
    for (double p1 : {1.0, 1.5, 2.0, 4.0})
      for (double p2 : {1.0, 2.0, 3.0})
        for (double beta : {0.0, 1.0}) {
          const OperatorParams op = derive_params(n, p1, 0.5, p2, 1.5, beta);
          if (op.lambda_zero) continue;
          const double lhs = (n + 1 + beta) + (n + 1 + 0.5) / p1 - (n + 1 + 1.5) / p2;
          CHECK(lhs == doctest::Approx((n + 1 + op.gamma) * op.lambda).epsilon(1e-14));
        }
  const OperatorParams z = derive_params(1, 0.5, 0, 1.0 / 3.0, 0, 1);
  CHECK(z.lambda_zero);
  CHECK(std::isnan(z.gamma));
  CHECK_THROWS_AS(derive_params(1, 0.0, 0, 2, 0, 0), ParameterError);
  CHECK_THROWS_AS(derive_params(1, 2, -1.0, 2, 0, 0), ParameterError);
  CHECK_FALSE(derive_params(1, 2, 0, 2, 0, -0.9).hypothesis());
}

TEST_CASE("Toeplitz operators of the weighted measure are the identity") {
  for (double beta : {0.0, 1.0, 2.5}) {
    const Measure mu = Measure::radial_density(disk, beta);
    TestFunction f = TestFunction::monomial(1, beta, {3}, cplx(1.0, -2.0));
    f.add(MonomialTerm{0.5, {0}});
    f.add(KernelTerm{cplx(0.0, 1.0), Point(0.8)});
    for (const Point& z : {Point(0.0), Point(cplx(0.3, 0.5)), Point(0.99)})
      CHECK(std::abs(apply_toeplitz(mu, f, z) - f(z)) < 1e-6 * std::max(1.0, std::abs(f(z))));
  }
}

TEST_CASE("Toeplitz images of radial densities match quadrature") {
  const Measure mu = Measure::radial_density(disk, 0.5, 1.5);
  const TestFunction f = TestFunction::kernel(1, 1.0, Point(cplx(0.6, 0.2)));
  const Point z(cplx(-0.3, 0.4));
  PolarRuleOptions o;
  o.focus = {Point(cplx(0.6, 0.2)), z};
  const ComplexEstimate q = apply_toeplitz(mu, 1.0, [&](const Point& w) { return f(w); }, z, polar_rule(disk, o));
  CHECK(std::abs(apply_toeplitz(mu, f, z) - q.value) < 1e-8 * std::abs(q.value));
  // Truncated density.
  const Measure cut = Measure::radial_density(disk, 0.0, 1.0, 0.6);
  o.focus.clear();
  o.min_delta = 1.0 - 0.36;
  const ComplexEstimate qc = apply_toeplitz(cut, 1.0, [&](const Point& w) { return f(w); }, z, polar_rule(disk, o));
  CHECK(std::abs(apply_toeplitz(cut, f, z) - qc.value) < 1e-6 * std::abs(qc.value));
  CHECK_THROWS_AS(apply_toeplitz(Measure::radial_density(disk, 0.2), 0.0, [](const Point&) { return cplx(1.0); }, z,
                                 polar_rule(disk), 1.5),
                  DivergenceError);
}

TEST_CASE("single atoms and the weighted volume") {
  const Point a(cplx(0.2, -0.5));
  const Measure atom = Measure::atomic(disk, {a}, {1.0});
  const TestFunction one = TestFunction::monomial(1, 0.0, {0});
  const Point z(cplx(0.1, 0.7));
  CHECK(std::abs(apply_toeplitz(atom, one, z) - bergman_kernel(KernelParams(1, 0.0), z, a)) < 1e-14);
  const Measure nu = Measure::radial_density(disk, 0.0);
  CHECK(std::abs(apply_toeplitz(nu, one, Point(0.0)) - 1.0) < 1e-12);
  CHECK(std::abs(apply_toeplitz(Measure::zero(disk), one, z)) == 0.0);
}

TEST_CASE("adjoint identity for atomic measures") {
  const double beta = 0.5;
  const Measure mu = random_atoms(1, 6, 4);
  TestFunction f = TestFunction::monomial(1, beta, {1}, cplx(1.0, 0.5));
  f.add(MonomialTerm{2.0, {0}});
  const TestFunction h = TestFunction::monomial(1, beta, {2}, cplx(0.0, 1.0));
  PolarRuleOptions o;
  o.focus = mu.atom_points();
  const QuadratureRule rule = polar_rule(disk, o);
  cplx rhs = 0.0;
  for (std::size_t i = 0; i < mu.atom_points().size(); ++i)
    rhs += mu.atom_weights()[i] * std::conj(h(mu.atom_points()[i])) * f(mu.atom_points()[i]);
  const ToeplitzImage tf(mu, f);
  const cplx lhs =
      duality_pairing([&](const Point& z) { return tf(z); }, [&](const Point& z) { return h(z); }, beta, rule).value;
  CHECK(std::abs(lhs - rhs) < 1e-8 * std::max(1.0, std::abs(rhs)));
}

TEST_CASE("linearity in the measure is exact for atoms") {
  const Measure m1 = random_atoms(1, 5, 1), m2 = random_atoms(1, 7, 2);
  std::vector<Point> pts = m1.atom_points();
  std::vector<double> w;
  for (double x : m1.atom_weights()) w.push_back(2.0 * x);
  for (std::size_t i = 0; i < m2.atom_points().size(); ++i) {
    pts.push_back(m2.atom_points()[i]);
    w.push_back(3.0 * m2.atom_weights()[i]);
  }
  const Measure sum = Measure::atomic(disk, pts, w);
  const TestFunction f = TestFunction::kernel(1, 1.0, Point(0.4));
  for (const Point& z : {Point(0.0), Point(cplx(0.5, -0.5))}) {
    const cplx lhs = apply_toeplitz(sum, f, z);
    const cplx rhs = 2.0 * apply_toeplitz(m1, f, z) + 3.0 * apply_toeplitz(m2, f, z);
    CHECK(std::abs(lhs - rhs) < 1e-12 * std::abs(lhs));
  }
}

TEST_CASE("lower bound probe") {
  const OperatorParams op = derive_params(1, 2, 0, 2, 0, 0);
  const Measure nu = Measure::radial_density(disk, 0.0);
  std::vector<double> values;
  for (int k = 2; k <= 10; k += 2) values.push_back(lower_bound_probe(nu, op, Point(1.0 - std::ldexp(1.0, -k)), 0.5).value);
  for (double v : values) CHECK(v == doctest::Approx(values.back()).epsilon(0.2));
  CHECK(lower_bound_probe(Measure::zero(disk), op, Point(0.9), 0.5).value == 0.0);
  CHECK_THROWS_AS(lower_bound_probe(nu, derive_params(1, 2, 0, 1, 0, 0), Point(0.9), 0.5), BranchError);
}

TEST_CASE("operator norm estimates") {
  ProbeOptions po;
  po.levels = 6;
  const OperatorParams id = derive_params(1, 2, 1, 2, 1, 1);
  const NormEstimate e = estimate_operator_norm(Measure::radial_density(disk, 1.0), id, ProbeFamily::kernel_probe, 1, po);
  CHECK(e.value <= 1.0 + 1e-12);
  CHECK(e.value >= 1.0 - 1e-4);
  const OperatorParams op = derive_params(1, 2, 0, 2, 0, 0);
  const Measure nu = Measure::radial_density(disk, 0.0);
  const NormEstimate full = estimate_operator_norm(nu, op, ProbeFamily::atom_probe, 3, po);
  const NormEstimate half = estimate_operator_norm(nu.scaled(0.5), op, ProbeFamily::atom_probe, 3, po);
  CHECK(half.value == doctest::Approx(0.5 * full.value).epsilon(1e-12));
  const NormEstimate poly = estimate_operator_norm(nu, op, ProbeFamily::polynomial, 4, po);
  CHECK(poly.value > 0.0);
  CHECK(poly.value <= 1.0 + 1e-9);
  CHECK(probe_family_from_string("vanishing_probe") == ProbeFamily::vanishing_probe);
  CHECK_THROWS_AS(probe_family_from_string("nope"), ParameterError);
}

TEST_CASE("compactness probe") {
  const OperatorParams op = derive_params(1, 2, 0, 2, 0, 0);
  const CompactnessResult v = compactness_probe(Measure::radial_density(disk, 0.5), op);
  CHECK(v.verdict == Verdict::vanishing);
  CHECK(v.fit.exponent == doctest::Approx(0.5).epsilon(0.2));
  const CompactnessResult c = compactness_probe(Measure::radial_density(disk, 0.0), op);
  CHECK(c.verdict == Verdict::carleson);
  CHECK(std::abs(c.fit.exponent) < 0.1);
  const CompactnessResult k = compactness_probe(Measure::radial_density(disk, 0.0, 1.0, std::sqrt(0.5)), op);
  CHECK(k.verdict == Verdict::vanishing);
  CHECK(k.fit.exponent >= (2.0 + 0.0) - (2.0 + 0.0) / 2.0 - 0.1);
  CHECK(compactness_probe(Measure::radial_density(disk, 0.0), derive_params(1, 2, 0, 1, 0, 0)).verdict == Verdict::vanishing);
}

TEST_CASE("sandwich agreement") {
  ProbeOptions po;
  po.levels = 8;
  const OperatorParams op = derive_params(1, 2, 0, 2, 0, 0);
  const Sandwich s = run_sandwich(Measure::radial_density(disk, 0.0), op, po);
  CHECK(s.agree);
  CHECK(s.lower.bounded);
  CHECK(s.estimate.bounded);
  CHECK(s.skew.bounded);
  CHECK(s.spread <= 100.0);
  const Sandwich d = run_sandwich(Measure::radial_density(disk, -0.5), op, po);
  CHECK(d.agree);
  CHECK_FALSE(d.lower.bounded);
  CHECK_FALSE(d.estimate.bounded);
  CHECK_FALSE(d.skew.bounded);
}
