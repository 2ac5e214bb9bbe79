#include <doctest.h>

#include <cmath>
#include <memory>
#include <numbers>

#include "toeplab/errors.hpp"
#include "toeplab/kernels.hpp"
#include "toeplab/measures.hpp"

using namespace toeplab;
using std::numbers::pi;

namespace {

const ModelDomain disk(1);

double closed_ball(double a, double r) { return ball_volume_closed_form(disk, KobayashiBall(Point(a), r)); }

}  // namespace

TEST_CASE("measure construction validates its input") {
  CHECK_THROWS_AS(Measure::radial_density(disk, -1.0), ParameterError);
  CHECK_THROWS_AS(Measure::radial_density(disk, 0.0, -2.0), ParameterError);
  CHECK_THROWS_AS(Measure::radial_density(disk, 0.0, 1.0, 1.5), ParameterError);
  CHECK_THROWS_AS(Measure::atomic(disk, {Point(1.2)}, {1.0}), DomainError);
  CHECK_THROWS_AS(Measure::atomic(disk, {Point(0.2)}, {-1.0}), ParameterError);
  CHECK(Measure::radial_density(disk, 0.0).total_mass() == doctest::Approx(pi));
  CHECK(Measure::radial_density(disk, 1.0).total_mass() == doctest::Approx(pi / 2));
  CHECK(Measure::zero(disk).total_mass() == 0.0);
}

TEST_CASE("ball masses") {
  const Measure atom = Measure::atomic(disk, {Point(0.3)}, {2.0});
  CHECK(ball_mass(atom, KobayashiBall(Point(0.0), 0.5)) == 2.0);
  CHECK(ball_mass(atom, KobayashiBall(Point(0.0), 0.2)) == 0.0);
  const Measure nu = Measure::radial_density(disk, 0.0);
  CHECK(ball_mass(nu, KobayashiBall(Point(0.9), 0.5)) == doctest::Approx(0.0445796).epsilon(1e-5));
  CHECK(ball_mass(nu, KobayashiBall(Point(0.9), 0.5)) == doctest::Approx(closed_ball(0.9, 0.5)).epsilon(1e-10));
  const Measure trunc = Measure::radial_density(disk, 0.0, 1.0, 0.5);
  CHECK(ball_mass(trunc, KobayashiBall(Point(0.0), 0.9)) == doctest::Approx(pi / 4).epsilon(1e-10));
  for (int n : {1, 2}) {
    const ModelDomain d(n);
    const Measure cut = Measure::radial_density(d, 0.5, 1.0, 0.7);
    const KobayashiBall b(axis_point(n, 0.6), 0.5);
    const Estimate mc = monte_carlo_oracle(
        d, [&](const Point& z) { return b.contains(z) && z.norm() < 0.7 ? 1.0 : 0.0; }, 0.5, 2000000, 8);
    CHECK(std::abs(ball_mass(cut, b) - mc.value) < 3.0 * mc.error);
  }
}

TEST_CASE("many atoms use the point index consistently") {
  std::vector<Point> pts;
  std::vector<double> w;
  for (int k = 0; k < 200; ++k) {
    pts.push_back(Point(std::polar(1.0 - std::pow(0.97, k + 1), 0.37 * k)));
    w.push_back(1.0 + k % 3);
  }
  const Measure mu = Measure::atomic(disk, pts, w);
  for (double a : {0.0, 0.5, 0.9, 0.99}) {
    const KobayashiBall b(Point(std::polar(a, 1.1)), 0.6);
    double brute = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) brute += b.contains(pts[i]) ? w[i] : 0.0;
    CHECK(ball_mass(mu, b) == doctest::Approx(brute));
  }
}

TEST_CASE("averaging functions") {
  const Measure nu = Measure::radial_density(disk, 0.0);
  for (double a : {0.0, 0.5, 0.99}) CHECK(mu_hat(nu, Point(a), 0.5, 1.0) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(mu_hat(nu, Point(0.9), 0.5, 1.5) == doctest::Approx(std::pow(0.0445796, -0.5)).epsilon(1e-4));
  CHECK(mu_hat(nu, Point(0.9), 0.5, 1.5) == doctest::Approx(4.736).epsilon(1e-3));
  CHECK(mu_hat(Measure::zero(disk), Point(0.5), 0.5, 1.0) == 0.0);
}

TEST_CASE("Berezin transforms") {
  const Measure nu = Measure::radial_density(disk, 0.0);
  for (double a : {0.0, 0.5, 0.9, 0.999}) CHECK(berezin_value(nu, Point(a), 2.0).value == doctest::Approx(1.0).epsilon(1e-10));
  const Point a(cplx(0.4, 0.3)), z(cplx(-0.2, 0.6));
  const Measure atom = Measure::atomic(disk, {a}, {1.0});
  for (double s : {1.0, 2.0, 3.5}) {
    const double expected = std::pow(std::abs(normalized_kernel(KernelParams(1, 0.0), z, a)), s);
    CHECK(berezin_value(atom, z, s).value == doctest::Approx(expected).epsilon(1e-12));
  }
  // The smooth closed form agrees with quadrature.
  const Measure mu = Measure::radial_density(disk, 0.5, 2.0);
  PolarRuleOptions o;
  o.focus = {Point(0.95)};
  o.radial_levels = 34;
  const BerezinValue q = berezin_transform(mu, Point(0.95), 3.0, polar_rule(disk, o));
  CHECK(berezin_value(mu, Point(0.95), 3.0).value == doctest::Approx(q.value).epsilon(1e-8));
  CHECK(berezin_divergence_warning(1, 4.0, 0.5));
  CHECK_FALSE(berezin_divergence_warning(1, 2.0, 0.5));
}

TEST_CASE("Berezin transform of nu at level 4 decays like delta^-2") {
  const Measure nu = Measure::radial_density(disk, 0.0);
  std::vector<double> xs, ys;
  for (double delta : {1e-3, 3e-3, 1e-2, 3e-2, 1e-1}) {
    xs.push_back(delta);
    ys.push_back(berezin_value(nu, Point(std::sqrt(1.0 - delta)), 4.0).value);
  }
  CHECK(fit_power_law(xs, ys).exponent == doctest::Approx(-2.0).epsilon(0.05));
}

TEST_CASE("skew Carleson norms over a sweep") {
  const Measure nu = Measure::radial_density(disk, 0.0);
  const auto grid = radial_grid(disk, 20, 1e-4, 0.5);
  CHECK(skew_carleson_norm(nu, CarlesonParams(1.0, 0.0, 0.5), grid).value == doctest::Approx(1.0).epsilon(1e-9));
  // gamma = 0.5 grows like eps^-0.5.
  std::vector<double> xs, ys;
  for (double eps : {1e-2, 1e-3, 1e-4}) {
    xs.push_back(eps);
    ys.push_back(skew_carleson_norm(nu, CarlesonParams(1.0, 0.5, 0.5), radial_grid(disk, 20, eps, 0.5)).value);
  }
  CHECK(fit_power_law(xs, ys).exponent == doctest::Approx(-0.5).epsilon(0.2));
  // Threshold density: n + 1 + t = (n + 1 + gamma) lambda.
  const Measure threshold = Measure::radial_density(disk, 1.0);
  const double a = skew_carleson_norm(threshold, CarlesonParams(1.0, 1.0, 0.5), radial_grid(disk, 20, 1e-2, 0.5)).value;
  const double b = skew_carleson_norm(threshold, CarlesonParams(1.0, 1.0, 0.5), radial_grid(disk, 20, 1e-4, 0.5)).value;
  CHECK(b / a == doctest::Approx(1.0).epsilon(0.05));
  CHECK_THROWS_AS(skew_carleson_norm(nu, CarlesonParams(0.0, 1.0, 0.5), grid), ParameterError);
}

TEST_CASE("classifier ground truth") {
  const CarlesonParams cp(1.0, 0.0, 0.5);
  const Classification c0 = classify_skew_carleson(Measure::radial_density(disk, 0.0), cp);
  CHECK(c0.verdict == Verdict::carleson);
  CHECK(c0.fit.exponent == doctest::Approx(0.0).epsilon(0.1));
  const Classification cv = classify_skew_carleson(Measure::radial_density(disk, 0.5), cp);
  CHECK(cv.verdict == Verdict::vanishing);
  CHECK(std::abs(cv.fit.exponent - 0.5) < 0.1);
  const Classification cn = classify_skew_carleson(Measure::radial_density(disk, -0.5), cp);
  CHECK(cn.verdict == Verdict::not_carleson);
  CHECK(std::abs(cn.fit.exponent + 0.5) < 0.1);
  CHECK_FALSE(c0.shell_delta.empty());
  CHECK(c0.shell_delta.size() == c0.shell_value.size());
}

TEST_CASE("lambda below one: bounded and vanishing coincide") {
  const CarlesonParams cp(0.75, 0.0, 0.5);
  // q = 4: integrable iff (2 + t) - 2 * 0.75 exceeds -1/q.
  CHECK(classify_skew_carleson(Measure::radial_density(disk, 0.0), cp).verdict == Verdict::vanishing);
  CHECK(classify_skew_carleson(Measure::radial_density(disk, -0.9), cp).verdict == Verdict::not_carleson);
}

TEST_CASE("lattice and Berezin diagnostics agree with the sup test") {
  const Lattice lat = build_lattice(disk, 0.5, 1e-3);
  for (double t : {-0.5, 0.0, 0.5}) {
    const Measure mu = Measure::radial_density(disk, t);
    const CarlesonParams cp(1.0, 0.0, 0.5);
    const Verdict v = classify_skew_carleson(mu, cp).verdict;
    CHECK(lattice_diagnostic(mu, cp, lat).verdict == v);
    CHECK(berezin_diagnostic(mu, cp).verdict == v);
  }
}

TEST_CASE("boundary atoms") {
  std::vector<Point> pts;
  std::vector<double> w2, w1;
  for (int k = 1; k <= 30; ++k) {
    pts.push_back(Point(1.0 - std::ldexp(1.0, -k)));
    const double d = boundary_distance(disk, pts.back());
    w2.push_back(d * d);
    w1.push_back(d);
  }
  const CarlesonParams cp(1.0, 0.0, 0.5);
  CHECK(classify_skew_carleson(Measure::atomic(disk, pts, w2), cp).verdict == Verdict::carleson);
  CHECK(classify_skew_carleson(Measure::atomic(disk, pts, w1), cp).verdict == Verdict::not_carleson);
}

TEST_CASE("reweighting") {
  const Measure nu = Measure::radial_density(disk, 0.0);
  const Measure same = reweight(nu, 0.0);
  CHECK(same.density().t == 0.0);
  const Measure mu1 = reweight(nu, 1.0);
  CHECK(mu1.density().t == 1.0);
  CHECK(classify_skew_carleson(mu1, CarlesonParams(1.0, 1.0, 0.5)).verdict == Verdict::carleson);
  const Measure atoms = Measure::atomic(disk, {Point(0.5), Point(0.9)}, {1.0, 2.0});
  const Measure r = reweight(atoms, 1.0);
  CHECK(r.atom_weights()[0] == doctest::Approx(0.75));
  CHECK(r.atom_weights()[1] == doctest::Approx(2.0 * 0.19));
  CHECK_THROWS_AS(reweight(Measure::radial_density(disk, -0.5), -0.6), ParameterError);
}

TEST_CASE("product Carleson test") {
  const Measure nu = Measure::radial_density(disk, 0.0);
  ProductFamily constant;
  constant.kind = ProductFamily::Kind::constant;
  const ProductTestResult one = product_carleson_test(nu, {constant}, 4);
  CHECK(std::isfinite(one.max_ratio));
  CHECK(one.bounded);
  ProductFamily f{ProductFamily::Kind::kernel_power, 2.0, 0.0, 2.0, 0.0};
  // lambda = 2, gamma = 0: delta^2 nu is (2, 0)-skew Carleson.
  const ProductTestResult two = product_carleson_test(Measure::radial_density(disk, 2.0), {f, f}, 4);
  CHECK(two.lambda == doctest::Approx(2.0));
  CHECK(two.gamma == doctest::Approx(0.0));
  CHECK(two.bounded);
  ProductFamily g{ProductFamily::Kind::kernel_power, 2.0, 0.0, 2.0, 0.0};
  const ProductTestResult grow = product_carleson_test(Measure::radial_density(disk, -0.5), {g}, 4);
  CHECK_FALSE(grow.bounded);
  CHECK(grow.ratios.back() > grow.ratios.front());
}
