#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <utility>
#include <unordered_map>
#include <vector>

namespace toeplab {

using cplx = std::complex<double>;

enum class WeightConvention { smooth, euclidean };

/// The open unit ball of C^n. The boundary distance is 1-|z|^2 under the smooth
/// convention and 1-|z| under the euclidean one.
struct ModelDomain {
  int n = 1;
  WeightConvention weight = WeightConvention::smooth;

  ModelDomain() = default;
  explicit ModelDomain(int dim, WeightConvention w = WeightConvention::smooth);

  /// Lebesgue volume pi^n / n!.
  double volume() const;
  /// Surface area 2 pi^n / (n-1)! of the unit sphere.
  double sphere_area() const;
};

struct Point {
  std::vector<cplx> coords;

  Point() = default;
  explicit Point(std::vector<cplx> c) : coords(std::move(c)) {}
  Point(cplx z) : coords{z} {}

  std::size_t dim() const { return coords.size(); }
  double norm_sq() const;
  double norm() const;
  cplx operator[](std::size_t i) const { return coords[i]; }
};

/// t * e_1 in C^n.
Point axis_point(int n, cplx t);
/// Unit vector direction scaled to modulus radius.
Point along(const Point& direction, double radius);

/// Hermitian product sum z_i conj(w_i).
cplx inner(const Point& z, const Point& w);

/// Converts a smooth boundary distance 1-|z|^2 to the given convention.
double delta_from_smooth(double smooth_delta, WeightConvention w);
/// Modulus |z| at which the boundary distance equals delta.
double radius_for_delta(const ModelDomain& d, double delta);

double boundary_distance(const ModelDomain& d, const Point& z);

/// |phi_z(w)|, the pseudo-hyperbolic distance.
double pseudo_hyperbolic(const Point& z, const Point& w);

/// The involutive automorphism phi_a exchanging a and 0.
Point mobius(const Point& a, const Point& z);

/// atanh of the pseudo-hyperbolic distance.
double kobayashi_distance(const ModelDomain& d, const Point& z, const Point& w);

/// {w : pseudo_hyperbolic(center, w) < radius}.
struct KobayashiBall {
  Point center;
  double radius = 0.5;

  KobayashiBall() = default;
  KobayashiBall(Point c, double r);
  bool contains(const Point& w) const;
};

/// Weighted volume of the ball with respect to delta^beta dnu.
double ball_volume(const ModelDomain& d, const KobayashiBall& b, double beta = 0.0);
/// Exact Lebesgue volume of the ball.
double ball_volume_closed_form(const ModelDomain& d, const KobayashiBall& b);
/// Pull-back quadrature through phi_center, valid for every beta > -1. When
/// support_radius < 1 only the part of the ball inside |z| < support_radius counts.
double ball_volume_numeric(const ModelDomain& d, const KobayashiBall& b, double beta,
                           double support_radius = 1.0);

/// Points uniformly distributed (Lebesgue) in the ball, which is a Euclidean
/// ellipsoid; deterministic for a given seed.
std::vector<Point> sample_ball(const ModelDomain& d, const KobayashiBall& b, std::size_t count,
                               std::uint64_t seed);

/// Points of {delta >= eps}: half uniform in volume, half uniform in the
/// hyperbolic radius so that the boundary layer is well represented.
std::vector<Point> sample_truncated_domain(const ModelDomain& d, double eps, std::size_t count,
                                           std::uint64_t seed);

struct DeltaRange {
  double min = 0.0;
  double max = 0.0;
};

/// Range of delta(z)/delta(z0) over sampled points of B(z0, r).
DeltaRange delta_comparability_check(const ModelDomain& d, const Point& z0, double r,
                                     std::size_t samples);

/// Points along the ray through direction whose boundary distances are
/// log-spaced from delta_max down to delta_min.
std::vector<Point> radial_grid(const ModelDomain& d, std::size_t count, double delta_min,
                               double delta_max, const Point& direction);
std::vector<Point> radial_grid(const ModelDomain& d, std::size_t count, double delta_min,
                               double delta_max);

/// Range queries "pseudo_hyperbolic(z, p) < rho" over a fixed point set. In
/// the disk points are binned by hyperbolic radius and sorted by angle; in
/// higher dimension the scan is exhaustive.
class PointIndex {
 public:
  PointIndex() = default;
  PointIndex(const std::vector<Point>& points, double bin_width = 0.1);

  /// Appends (index, distance) for every indexed point with distance < rho.
  void query(const Point& z, double rho, std::vector<std::pair<std::size_t, double>>& out) const;
  /// Adds a point (n >= 2 only); it receives the next index.
  void insert(const Point& p);
  std::size_t size() const { return size_; }

 private:
  struct Entry {
    double angle;
    std::size_t index;
  };
  std::size_t size_ = 0;
  bool disk_ = true;
  double bin_width_ = 0.1;
  std::vector<cplx> flat_;
  std::vector<std::vector<Entry>> bins_;
  // n >= 2: coordinates packed n per point. Points are grouped in dyadic shells
  // of 1 - |w|^2 and hashed on a Euclidean grid of width sqrt(2^-j) in shell j.
  struct Shell {
    double width = 1.0;
    std::vector<std::size_t> members;
    std::unordered_map<std::uint64_t, std::vector<std::size_t>> cells;
  };
  std::size_t dim_ = 1;
  std::vector<Shell> shells_;
  std::uint64_t cell_key(std::size_t shell, const std::vector<long long>& cell) const;
  void cell_of(const cplx* z, double width, std::vector<long long>& cell) const;
  double distance(const cplx* z, std::size_t i) const;
};

struct Lattice {
  std::vector<Point> centers;
  double r = 0.5;
  int overlap_bound = 0;          // m: max number of balls B(a_k, (1+r)/2) through a point
  double boundary_cutoff = 1e-3;  // eps: the lattice covers {delta >= eps}
  std::size_t candidates = 0;
  double covering_radius = 0.0;  // max pseudo-hyperbolic distance from a candidate or probe point to the centers
  double min_separation = 0.0;   // min Kobayashi distance between distinct centers
};

struct LatticeOptions {
  std::size_t max_candidates = 4'000'000;
  std::size_t random_candidates = 6000;  // candidate count when n >= 2
  int repair_rounds = 16;                // n >= 2: coverage probe rounds
  std::size_t repair_samples = 20000;    // n >= 2: probe points per round
  std::uint64_t seed = 20240601;
};

/// Greedy farthest-point r-lattice of {delta >= eps}. Ties are broken by the
/// lowest candidate index. Throws ResourceError when the candidate grid would
/// exceed the budget.
Lattice build_lattice(const ModelDomain& d, double r, double eps, const LatticeOptions& options = {});

struct LatticeCheck {
  std::size_t samples = 0;
  std::size_t uncovered = 0;
  int max_overlap = 0;
};

/// Covering (radius r) and overlap (radius (1+r)/2) counts on the given samples.
LatticeCheck check_lattice(const Lattice& lattice, const std::vector<Point>& samples);

}  // namespace toeplab
