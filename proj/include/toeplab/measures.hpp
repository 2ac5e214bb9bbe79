#pragma once

#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "toeplab/fit.hpp"
#include "toeplab/geometry.hpp"
#include "toeplab/quadrature.hpp"

namespace toeplab {

/// Finite sum of point masses.
struct AtomicMeasure {
  std::vector<Point> points;
  std::vector<double> weights;
};

/// scale * delta^t dnu restricted to |w| < outer_radius.
struct RadialDensity {
  double t = 0.0;
  double scale = 1.0;
  double outer_radius = 1.0;
};

/// Point masses at the centers of an r-lattice.
struct LatticeWeighted {
  std::shared_ptr<const Lattice> lattice;
  std::vector<double> weights;
};

/// A finite positive Borel measure on the ball in one of three representations.
/// Immutable once built.
class Measure {
 public:
  using Kind = std::variant<AtomicMeasure, RadialDensity, LatticeWeighted>;

  static Measure atomic(const ModelDomain& d, std::vector<Point> points, std::vector<double> weights);
  static Measure radial_density(const ModelDomain& d, double t, double scale = 1.0, double outer_radius = 1.0);
  static Measure lattice_weighted(const ModelDomain& d, std::shared_ptr<const Lattice> lattice,
                                  std::vector<double> weights);
  static Measure zero(const ModelDomain& d);

  const ModelDomain& domain() const { return domain_; }
  const Kind& kind() const { return kind_; }
  double total_mass() const { return total_mass_; }

  bool is_radial() const { return std::holds_alternative<RadialDensity>(kind_); }
  /// Atomic and lattice-weighted measures.
  bool is_discrete() const { return !is_radial(); }
  const RadialDensity& density() const { return std::get<RadialDensity>(kind_); }
  const std::vector<Point>& atom_points() const;
  const std::vector<double>& atom_weights() const;

  /// factor * mu; factor must be positive.
  Measure scaled(double factor) const;
  std::string describe() const;

  /// Mass of B(a, r) for a radial density, cached by |a| and r.
  double cached_radial_ball_mass(const KobayashiBall& b) const;
  /// Indices and distances of atoms inside a ball (discrete measures).
  void atoms_in_ball(const KobayashiBall& b, std::vector<std::pair<std::size_t, double>>& out) const;

 private:
  struct Cache;
  Measure(const ModelDomain& d, Kind kind);

  ModelDomain domain_;
  Kind kind_;
  double total_mass_ = 0.0;
  std::shared_ptr<PointIndex> index_;
  std::shared_ptr<Cache> cache_;
};

/// mu(B): exact sum for discrete measures, pull-back quadrature for densities.
double ball_mass(const Measure& mu, const KobayashiBall& b);

/// mu(B(z, r)) / nu(B(z, r))^exponent.
double mu_hat(const Measure& mu, const Point& z, double r, double exponent);

/// Parameters of a (lambda, gamma)-skew Carleson test.
struct CarlesonParams {
  double lambda = 1.0;
  double gamma = 0.0;
  double r = 0.5;

  CarlesonParams() = default;
  CarlesonParams(double l, double g, double radius);
  double theta(int n) const { return 1.0 + gamma / (n + 1); }
};

struct BerezinValue {
  double value = 0.0;
  double error = 0.0;
  /// Set for radial densities with s(n+1)/2 >= n+1+t.
  bool divergence_warning = false;
};

/// B^s mu(z) = integral of |k_z(w)|^s dmu(w) with the unweighted normalized kernel.
/// Discrete measures are summed exactly; densities use the rule.
BerezinValue berezin_transform(const Measure& mu, const Point& z, double s, const QuadratureRule& rule);

/// B^s mu(z) by the cheapest exact route: closed form for smooth radial
/// densities, exact sums for discrete measures, a focused quadrature otherwise.
BerezinValue berezin_value(const Measure& mu, const Point& z, double s);

/// True when B^s of the radial density delta^t nu would carry the divergence warning.
bool berezin_divergence_warning(int n, double s, double t);

struct SkewNorm {
  double value = 0.0;
  double deepest_delta = 0.0;
  bool sup_branch = true;  // lambda >= 1
  std::size_t points = 0;
};

/// lambda >= 1: sup over the grid of mu_hat_{r,lambda} delta^(-gamma lambda).
/// lambda < 1: L^(1/(1-lambda)) norm of mu_hat_r delta^(-gamma lambda) over
/// {delta >= deepest grid delta}. Throws ParameterError for lambda = 0 with gamma != 0.
SkewNorm skew_carleson_norm(const Measure& mu, const CarlesonParams& cp, const std::vector<Point>& grid);

enum class Verdict { carleson, vanishing, not_carleson, inconclusive };
const char* to_string(Verdict v);

/// A verdict with the evidence behind it: fitted exponent of the shell values
/// against delta, the shells themselves and the grid depth.
struct Classification {
  Verdict verdict = Verdict::inconclusive;
  PowerFit fit;
  double deepest_delta = 0.0;
  double norm = 0.0;  // sup (lambda >= 1) or L^q / l^q norm (lambda < 1)
  std::vector<double> shell_delta;
  std::vector<double> shell_value;
  std::string diagnostic;
};

struct SweepOptions {
  std::size_t grid_count = 48;
  double delta_min = 1e-3;
  double delta_max = 0.5;
  double fit_delta_max = 0.1;
  double slope_tolerance = 0.1;
  /// Number of rotated copies of the radial grid used for discrete measures.
  std::size_t angular_copies = 32;
  std::uint64_t seed = 7;
};

/// Grid of centers used by the sweeps: a radial grid along e_1, rotated copies
/// for measures without rotational symmetry.
std::vector<Point> sweep_grid(const Measure& mu, const SweepOptions& options);

/// Verdict from the boundary behaviour of mu_hat_{r,lambda} delta^(-gamma lambda)
/// (lambda >= 1) or of the shell integrals of the L^q integrand (lambda < 1,
/// where boundedness and vanishing coincide).
Classification classify_skew_carleson(const Measure& mu, const CarlesonParams& cp,
                                      const SweepOptions& options = {});

/// The lattice form of the same test: mu(B(a_k, r)) against nu(B(a_k, r))^(lambda theta).
Classification lattice_diagnostic(const Measure& mu, const CarlesonParams& cp, const Lattice& lattice,
                                  const SweepOptions& options = {});

/// Default Berezin level: 2 ceil(lambda theta) when lambda >= 1, else the
/// smallest even integer above lambda theta + n/(n+1)(1 - lambda).
double default_berezin_level(int n, const CarlesonParams& cp);

/// The Berezin form of the same test at level s (0 selects the default).
Classification berezin_diagnostic(const Measure& mu, const CarlesonParams& cp, double s = 0.0,
                                  const SweepOptions& options = {});

/// delta^beta mu. Throws ParameterError if the result is not a finite measure.
Measure reweight(const Measure& mu, double beta);

/// One factor of the product test: |f_j|^(q_j) with f_j in A^(p_j)_(alpha_j).
struct ProductFamily {
  enum class Kind { constant, kernel_power };
  Kind kind = Kind::kernel_power;
  double p = 2.0;
  double alpha = 0.0;
  double q = 2.0;
  /// Power of the normalized kernel; 0 selects 2(n+1+alpha)/((n+1)p) + 1.
  double sigma = 0.0;
};

struct ProductTestResult {
  double lambda = 0.0;
  double gamma = 0.0;
  double max_ratio = 0.0;
  std::vector<double> deltas;
  std::vector<double> ratios;
  PowerFit fit;
  bool bounded = true;
};

/// Ratios of integral prod |f_j|^(q_j) dmu to prod ||f_j||^(q_j) over test
/// functions f_j = delta(a)^(r_j) k_a^(sigma_j) centred on a boundary sequence.
ProductTestResult product_carleson_test(const Measure& mu, const std::vector<ProductFamily>& families,
                                        std::size_t trials, const SweepOptions& options = {});

}  // namespace toeplab
