#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "toeplab/errors.hpp"
#include "toeplab/geometry.hpp"
#include "toeplab/quadrature.hpp"

using namespace toeplab;
using std::numbers::pi;

namespace {

Point random_point(int n, std::mt19937_64& rng, double rmax = 0.99) {
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(0.0, rmax);
  std::vector<cplx> c(n);
  for (auto& x : c) x = cplx(g(rng), g(rng));
  return along(Point(c), u(rng));
}

}  // namespace

TEST_CASE("boundary distance under both conventions") {
  const ModelDomain smooth(1), eucl(1, WeightConvention::euclidean);
  CHECK(boundary_distance(smooth, Point(0.0)) == 1.0);
  CHECK(boundary_distance(eucl, Point(0.9)) == doctest::Approx(0.1));
  CHECK(boundary_distance(smooth, Point(0.9)) == doctest::Approx(0.19));
  CHECK_THROWS_AS(boundary_distance(smooth, Point(1.0)), DomainError);
  CHECK(radius_for_delta(smooth, 0.19) == doctest::Approx(0.9));
  CHECK(radius_for_delta(eucl, 0.1) == doctest::Approx(0.9));
}

TEST_CASE("Kobayashi and pseudo-hyperbolic distances") {
  const ModelDomain d(1);
  CHECK(kobayashi_distance(d, Point(0.0), Point(0.5)) == doctest::Approx(0.5 * std::log(3.0)).epsilon(1e-12));
  CHECK(kobayashi_distance(d, Point(0.4), Point(0.4)) == 0.0);
  CHECK(pseudo_hyperbolic(Point(0.3), Point(0.6)) == doctest::Approx(0.3 / 0.82).epsilon(1e-12));
  CHECK(kobayashi_distance(d, Point(0.3), Point(0.6)) == doctest::Approx(std::atanh(0.3 / 0.82)).epsilon(1e-12));
}

TEST_CASE("distances are symmetric, Mobius invariant and satisfy the triangle inequality") {
  std::mt19937_64 rng(5);
  for (int n : {1, 2, 3}) {
    const ModelDomain d(n);
    for (int i = 0; i < 50; ++i) {
      const Point a = random_point(n, rng), z = random_point(n, rng), w = random_point(n, rng);
      CHECK(pseudo_hyperbolic(z, w) == doctest::Approx(pseudo_hyperbolic(w, z)).epsilon(1e-10));
      CHECK(pseudo_hyperbolic(mobius(a, z), mobius(a, w)) == doctest::Approx(pseudo_hyperbolic(z, w)).epsilon(1e-8));
      CHECK(pseudo_hyperbolic(a, z) == doctest::Approx(mobius(a, z).norm()).epsilon(1e-10));
      CHECK(kobayashi_distance(d, z, w) <= kobayashi_distance(d, z, a) + kobayashi_distance(d, a, w) + 1e-9);
    }
  }
}

TEST_CASE("Mobius map is an involution swapping 0 and a") {
  std::mt19937_64 rng(9);
  for (int n : {1, 2}) {
    const Point a = random_point(n, rng), z = random_point(n, rng);
    const Point back = mobius(a, mobius(a, z));
    for (std::size_t k = 0; k < z.dim(); ++k) CHECK(std::abs(back[k] - z[k]) < 1e-10);
    CHECK(mobius(a, a).norm() < 1e-12);
    const Point zero = axis_point(n, 0.0);
    for (std::size_t k = 0; k < a.dim(); ++k) CHECK(std::abs(mobius(a, zero)[k] - a[k]) < 1e-14);
  }
}

TEST_CASE("ball volumes") {
  const ModelDomain d(1);
  CHECK(ball_volume(d, KobayashiBall(Point(0.0), 0.5)) == doctest::Approx(pi / 4).epsilon(1e-12));
  const KobayashiBall b(Point(0.9), 0.5);
  const double closed = ball_volume_closed_form(d, b);
  CHECK(closed == doctest::Approx(pi * 0.25 * std::pow(0.19, 2) / std::pow(1 - 0.25 * 0.81, 2)).epsilon(1e-13));
  CHECK(closed == doctest::Approx(0.0445796).epsilon(1e-5));
  CHECK(ball_volume_numeric(d, b, 0.0) == doctest::Approx(closed).epsilon(1e-10));
  const Estimate mc = monte_carlo_oracle(d, [&](const Point& z) { return b.contains(z) ? 1.0 : 0.0; }, 0.0, 1000000, 3);
  CHECK(std::abs(mc.value - closed) < 3.0 * mc.error);
  for (int n : {2, 3}) {
    const ModelDomain dn(n);
    const KobayashiBall bn(axis_point(n, 0.7), 0.4);
    CHECK(ball_volume_numeric(dn, bn, 0.0) == doctest::Approx(ball_volume_closed_form(dn, bn)).epsilon(1e-9));
  }
}

TEST_CASE("ball volume is comparable to delta^(n+1) toward the boundary") {
  const ModelDomain d(1);
  for (double delta : {1e-1, 1e-2, 1e-3, 1e-4}) {
    const Point a(radius_for_delta(d, delta));
    const double ratio = ball_volume(d, KobayashiBall(a, 0.5)) / std::pow(delta, 2);
    CHECK(ratio > 0.1);
    CHECK(ratio < 10.0);
  }
}

TEST_CASE("samples of a ball lie inside it") {
  for (int n : {1, 2}) {
    const ModelDomain d(n);
    const KobayashiBall b(axis_point(n, 0.95), 0.6);
    for (const Point& z : sample_ball(d, b, 2000, 4)) CHECK(b.contains(z));
  }
}

TEST_CASE("delta comparability on balls") {
  const ModelDomain eucl(1, WeightConvention::euclidean);
  const DeltaRange r0 = delta_comparability_check(eucl, Point(0.0), 0.5, 5000);
  CHECK(r0.min >= 0.5);
  CHECK(r0.max <= 1.0);
  const DeltaRange tiny = delta_comparability_check(eucl, Point(0.4), 1e-6, 100);
  CHECK(tiny.min == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(tiny.max == doctest::Approx(1.0).epsilon(1e-4));
  const DeltaRange deep = delta_comparability_check(eucl, Point(0.99), 0.5, 20000);
  CHECK(deep.max / deep.min <= 9.01);
}

TEST_CASE("radial grid is log-spaced in delta") {
  const ModelDomain d(1);
  const auto g = radial_grid(d, 5, 1e-4, 1e-0 * 0.5);
  REQUIRE(g.size() == 5);
  CHECK(boundary_distance(d, g.front()) == doctest::Approx(0.5));
  CHECK(boundary_distance(d, g.back()) == doctest::Approx(1e-4));
}

TEST_CASE("lattices cover the truncated domain and stay separated") {
  const ModelDomain eucl(1, WeightConvention::euclidean);
  const Lattice small = build_lattice(eucl, 0.5, 0.5);
  CHECK(small.centers.size() >= 1);
  CHECK(small.centers.size() <= 9);
  const Lattice big = build_lattice(ModelDomain(1), 0.99, 0.3);
  CHECK(big.centers.size() == 1);
  for (double eps : {0.5, 0.1, 0.01}) {
    const ModelDomain d(1);
    const Lattice lat = build_lattice(d, 0.5, eps);
    CHECK(lat.overlap_bound >= 1);
    for (const Point& a : lat.centers) CHECK(boundary_distance(d, a) >= eps * (1 - 1e-12));
    const LatticeCheck chk = check_lattice(lat, sample_truncated_domain(d, eps, 10000, 17));
    CHECK(chk.uncovered == 0);
    CHECK(lat.covering_radius < 0.5);
    CHECK(lat.min_separation >= std::atanh(0.5) / 2);
  }
}

TEST_CASE("point index queries agree with brute force") {
  std::mt19937_64 rng(21);
  for (int n : {1, 2}) {
    std::vector<Point> pts;
    for (int i = 0; i < 400; ++i) pts.push_back(random_point(n, rng, 0.999));
    const PointIndex index(pts, 0.1);
    for (int q = 0; q < 50; ++q) {
      const Point z = random_point(n, rng, 0.999);
      for (double rho : {0.2, 0.6, 0.95}) {
        std::vector<std::pair<std::size_t, double>> hits;
        index.query(z, rho, hits);
        std::size_t expected = 0;
        for (const Point& p : pts) expected += pseudo_hyperbolic(z, p) < rho;
        CHECK(hits.size() == expected);
      }
    }
  }
}
