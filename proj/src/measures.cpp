#include "toeplab/measures.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <random>
#include <sstream>

#include "toeplab/errors.hpp"
#include "toeplab/kernels.hpp"
#include "toeplab/parallel.hpp"
#include "toeplab/special.hpp"

namespace toeplab {

namespace {

constexpr double kPi = std::numbers::pi;

double radial_total_mass(const ModelDomain& d, const RadialDensity& rd) {
  const int n = d.n;
  if (rd.outer_radius >= 1.0) {
    if (d.weight == WeightConvention::smooth)
      return rd.scale * std::pow(kPi, n) * std::exp(std::lgamma(rd.t + 1.0) - std::lgamma(n + rd.t + 1.0));
    return rd.scale * d.sphere_area() *
           std::exp(std::lgamma(2.0 * n) + std::lgamma(rd.t + 1.0) - std::lgamma(2.0 * n + rd.t + 1.0));
  }
  // |S| * int_0^R rho^(2n-1) delta(rho)^t drho on a few panels.
  const KronrodRule& gk = gauss_kronrod15();
  double sum = 0.0;
  const int panels = 8;
  for (int p = 0; p < panels; ++p) {
    const double lo = rd.outer_radius * p / panels, hi = rd.outer_radius * (p + 1) / panels;
    const double half = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
    for (int i = 0; i < 15; ++i) {
      const double rho = mid + half * gk.nodes[i];
      const double delta = delta_from_smooth(1.0 - rho * rho, d.weight);
      sum += half * gk.kronrod_weights[i] * std::pow(rho, 2 * n - 1) * std::pow(delta, rd.t);
    }
  }
  return rd.scale * d.sphere_area() * sum;
}

// |k_z(w)|^s for the unweighted normalized kernel, evaluated in log space.
// |k_z(w)|^s with k_z = K(., z) / sqrt(K(z, z)) and K(z, w) = (n!/pi^n) (1 - <z, w>)^-(n+1).
double normalized_kernel_power(int n, const Point& z, const Point& w, double s) {
  const double lc = std::log(kernel_constant_closed_form(n, 0.0));
  const double lz = std::log(1.0 - z.norm_sq());
  const double lw = 0.5 * std::log(std::norm(1.0 - inner(w, z)));
  return std::exp(s * (0.5 * lc + 0.5 * (n + 1) * lz - (n + 1) * lw));
}

struct ShellSample {
  double delta;
  double value;
};

// Shell maxima over dyadic delta shells of the points with delta <= fit_max.
Classification sup_classification(const std::vector<ShellSample>& samples, const SweepOptions& options) {
  Classification c;
  c.deepest_delta = INFINITY;
  c.norm = 0.0;
  std::map<int, ShellSample> shells;
  for (const ShellSample& s : samples) {
    c.deepest_delta = std::min(c.deepest_delta, s.delta);
    c.norm = std::max(c.norm, s.value);
    if (s.delta > options.fit_delta_max * (1.0 + 1e-12)) continue;
    const int k = static_cast<int>(std::floor(std::log2(1.0 / s.delta)));
    auto it = shells.find(k);
    if (it == shells.end() || s.value > it->second.value) shells[k] = s;
  }
  std::vector<double> xs, ys;
  bool any_positive = false;
  for (const auto& [k, s] : shells) {
    c.shell_delta.push_back(s.delta);
    c.shell_value.push_back(s.value);
    if (s.value > 0.0) {
      any_positive = true;
      xs.push_back(s.delta);
      ys.push_back(s.value);
    }
  }
  if (!shells.empty() && !any_positive) {
    c.verdict = Verdict::vanishing;
    c.fit.exponent = NAN;
    c.diagnostic = "quantity vanishes identically near the boundary";
    return c;
  }
  if (xs.size() < 3) {
    c.verdict = Verdict::inconclusive;
    c.diagnostic = "fewer than three positive shells in the fit range";
    return c;
  }
  if (c.deepest_delta > 1e-2) {
    c.verdict = Verdict::inconclusive;
    c.diagnostic = "grid does not reach delta <= 1e-2";
    return c;
  }
  c.fit = fit_power_law(xs, ys);
  if (c.fit.exponent > options.slope_tolerance) c.verdict = Verdict::vanishing;
  else if (c.fit.exponent < -options.slope_tolerance) c.verdict = Verdict::not_carleson;
  else c.verdict = Verdict::carleson;
  c.diagnostic = "slope of shell maxima against delta";
  return c;
}

// Verdict from integrals over dyadic shells: a positive exponent means the
// total integral converges.
Classification shell_integral_classification(const std::vector<ShellSample>& shells, double q,
                                             double deepest, const SweepOptions& options) {
  Classification c;
  c.deepest_delta = deepest;
  double total = 0.0;
  std::vector<double> xs, ys;
  bool any_positive = false;
  for (const ShellSample& s : shells) {
    total += s.value;
    c.shell_delta.push_back(s.delta);
    c.shell_value.push_back(s.value);
    if (s.delta > options.fit_delta_max * (1.0 + 1e-12)) continue;
    if (s.value > 0.0) {
      any_positive = true;
      xs.push_back(s.delta);
      ys.push_back(s.value);
    }
  }
  c.norm = std::pow(total, 1.0 / q);
  if (!any_positive) {
    c.verdict = Verdict::vanishing;
    c.fit.exponent = NAN;
    c.diagnostic = "integrand vanishes identically near the boundary";
    return c;
  }
  if (xs.size() < 3) {
    c.verdict = Verdict::inconclusive;
    c.diagnostic = "fewer than three positive shells in the fit range";
    return c;
  }
  if (deepest > 1e-2) {
    c.verdict = Verdict::inconclusive;
    c.diagnostic = "truncation does not reach delta <= 1e-2";
    return c;
  }
  c.fit = fit_power_law(xs, ys);
  if (c.fit.exponent > options.slope_tolerance) {
    c.verdict = Verdict::vanishing;
    c.diagnostic = "shell integrals decay geometrically: finite norm, hence vanishing";
  } else if (c.fit.exponent < -options.slope_tolerance) {
    c.verdict = Verdict::not_carleson;
    c.diagnostic = "shell integrals grow toward the boundary: infinite norm";
  } else {
    c.verdict = Verdict::inconclusive;
    c.diagnostic = "shell integrals neither grow nor decay within tolerance";
  }
  return c;
}

// Integrals of g^q over the dyadic delta shells of {delta >= eps}. Radial
// integrands are evaluated once per radius.
std::vector<ShellSample> lq_shells(const Measure& mu, double eps, double q,
                                   const std::function<double(const Point&)>& g, const SweepOptions& options) {
  const ModelDomain& d = mu.domain();
  const int n = d.n;
  const KronrodRule& gk = gauss_kronrod15();
  std::vector<std::pair<double, double>> bounds;  // (delta_lo, delta_hi)
  for (int k = 0;; ++k) {
    const double hi = std::ldexp(1.0, -k);
    if (hi <= eps) break;
    bounds.emplace_back(std::max(eps, 0.5 * hi), hi);
  }
  std::vector<ShellSample> out(bounds.size());
  parallel_for(bounds.size(), [&](std::size_t k) {
    const auto [dlo, dhi] = bounds[k];
    // delta decreases with the radius.
    const double rlo = radius_for_delta(d, dhi), rhi = radius_for_delta(d, dlo);
    const double half = 0.5 * (rhi - rlo), mid = 0.5 * (rhi + rlo);
    double sum = 0.0;
    for (int i = 0; i < 15; ++i) {
      const double rho = mid + half * gk.nodes[i];
      double sphere = 0.0;  // integral over the sphere of radius rho, divided by rho^(2n-1)
      if (mu.is_radial()) {
        sphere = d.sphere_area() * std::pow(g(axis_point(n, rho)), q);
      } else if (n == 1) {
        const int m = static_cast<int>(std::clamp(std::ceil(32.0 / dlo), 64.0, 16384.0));
        double acc = 0.0;
        for (int j = 0; j < m; ++j) acc += std::pow(g(Point(std::polar(rho, 2.0 * kPi * (j + 0.5) / m))), q);
        sphere = 2.0 * kPi * acc / m;
      } else {
        std::mt19937_64 rng(options.seed + k);
        std::normal_distribution<double> normal(0.0, 1.0);
        const int m = 256;
        double acc = 0.0;
        for (int j = 0; j < m; ++j) {
          std::vector<cplx> c(n);
          for (auto& v : c) v = cplx(normal(rng), normal(rng));
          acc += std::pow(g(along(Point(std::move(c)), rho)), q);
        }
        sphere = d.sphere_area() * acc / m;
      }
      sum += half * gk.kronrod_weights[i] * std::pow(rho, 2 * n - 1) * sphere;
    }
    out[k] = {std::sqrt(dlo * dhi), sum};
  });
  return out;
}

std::vector<ShellSample> evaluate_on(const std::vector<Point>& grid, const ModelDomain& d,
                                     const std::function<double(const Point&)>& f) {
  std::vector<ShellSample> out(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) { out[i] = {boundary_distance(d, grid[i]), f(grid[i])}; });
  return out;
}

void check_lambda(const CarlesonParams& cp) {
  if (cp.lambda == 0.0 && cp.gamma != 0.0)
    throw ParameterError("skew Carleson test: for lambda = 0 the condition does not depend on gamma; pass gamma = 0");
  if (cp.lambda < 0.0) throw ParameterError("skew Carleson test: lambda must be non-negative");
}

}  // namespace

// ---------------------------------------------------------------------------
// Measure

struct Measure::Cache {
  std::mutex mutex;
  std::map<std::pair<long long, long long>, double> ball_mass;
};

Measure::Measure(const ModelDomain& d, Kind kind) : domain_(d), kind_(std::move(kind)) {
  if (is_radial()) {
    const RadialDensity& rd = density();
    if (!(rd.t > -1.0)) throw ParameterError("radial density exponent t must exceed -1");
    if (!(rd.scale > 0.0)) throw ParameterError("radial density scale must be positive");
    if (!(rd.outer_radius > 0.0 && rd.outer_radius <= 1.0))
      throw ParameterError("radial density outer radius must lie in (0, 1]");
    total_mass_ = radial_total_mass(d, rd);
    cache_ = std::make_shared<Cache>();
    return;
  }
  const auto& pts = atom_points();
  const auto& ws = atom_weights();
  if (pts.size() != ws.size()) throw ParameterError("measure: points and weights differ in length");
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (static_cast<int>(pts[i].dim()) != d.n) throw ParameterError("measure: atom has the wrong dimension");
    if (!(pts[i].norm_sq() < 1.0)) throw DomainError("measure: atom outside the ball");
    if (!(ws[i] > 0.0) || !std::isfinite(ws[i])) throw ParameterError("measure: atom weights must be positive and finite");
    total_mass_ += ws[i];
  }
  if (pts.size() > 32) index_ = std::make_shared<PointIndex>(pts, 0.1);
}

Measure Measure::atomic(const ModelDomain& d, std::vector<Point> points, std::vector<double> weights) {
  return Measure(d, AtomicMeasure{std::move(points), std::move(weights)});
}

Measure Measure::radial_density(const ModelDomain& d, double t, double scale, double outer_radius) {
  return Measure(d, RadialDensity{t, scale, outer_radius});
}

Measure Measure::lattice_weighted(const ModelDomain& d, std::shared_ptr<const Lattice> lattice,
                                  std::vector<double> weights) {
  if (!lattice) throw ParameterError("lattice-weighted measure needs a lattice");
  return Measure(d, LatticeWeighted{std::move(lattice), std::move(weights)});
}

Measure Measure::zero(const ModelDomain& d) { return atomic(d, {}, {}); }

const std::vector<Point>& Measure::atom_points() const {
  if (const auto* a = std::get_if<AtomicMeasure>(&kind_)) return a->points;
  if (const auto* l = std::get_if<LatticeWeighted>(&kind_)) return l->lattice->centers;
  throw ParameterError("measure has no atoms");
}

const std::vector<double>& Measure::atom_weights() const {
  if (const auto* a = std::get_if<AtomicMeasure>(&kind_)) return a->weights;
  if (const auto* l = std::get_if<LatticeWeighted>(&kind_)) return l->weights;
  throw ParameterError("measure has no atoms");
}

Measure Measure::scaled(double factor) const {
  if (!(factor > 0.0)) throw ParameterError("measure scale factor must be positive");
  if (is_radial()) {
    RadialDensity rd = density();
    rd.scale *= factor;
    return Measure(domain_, rd);
  }
  std::vector<double> ws = atom_weights();
  for (double& w : ws) w *= factor;
  if (const auto* l = std::get_if<LatticeWeighted>(&kind_)) return lattice_weighted(domain_, l->lattice, ws);
  return atomic(domain_, atom_points(), ws);
}

std::string Measure::describe() const {
  std::ostringstream os;
  if (is_radial()) {
    const RadialDensity& rd = density();
    os << rd.scale << " * delta^" << rd.t << " dnu";
    if (rd.outer_radius < 1.0) os << " on |z| < " << rd.outer_radius;
  } else if (std::holds_alternative<LatticeWeighted>(kind_)) {
    os << "lattice-weighted, " << atom_points().size() << " atoms";
  } else {
    os << "atomic, " << atom_points().size() << " atoms";
  }
  return os.str();
}

double Measure::cached_radial_ball_mass(const KobayashiBall& b) const {
  const RadialDensity& rd = density();
  const auto key = std::make_pair(std::llround(b.center.norm_sq() * 1e13), std::llround(b.radius * 1e13));
  {
    std::lock_guard<std::mutex> lock(cache_->mutex);
    auto it = cache_->ball_mass.find(key);
    if (it != cache_->ball_mass.end()) return it->second;
  }
  double v;
  if (rd.outer_radius < 1.0) v = rd.scale * ball_volume_numeric(domain_, b, rd.t, rd.outer_radius);
  else v = rd.scale * ball_volume(domain_, b, rd.t);
  std::lock_guard<std::mutex> lock(cache_->mutex);
  cache_->ball_mass.emplace(key, v);
  return v;
}

void Measure::atoms_in_ball(const KobayashiBall& b, std::vector<std::pair<std::size_t, double>>& out) const {
  if (index_) {
    index_->query(b.center, b.radius, out);
    return;
  }
  const auto& pts = atom_points();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double v = pseudo_hyperbolic(b.center, pts[i]);
    if (v < b.radius) out.emplace_back(i, v);
  }
}

// ---------------------------------------------------------------------------
// Ball quantities

double ball_mass(const Measure& mu, const KobayashiBall& b) {
  if (static_cast<int>(b.center.dim()) != mu.domain().n) throw ParameterError("ball_mass: dimension mismatch");
  if (mu.is_radial()) return mu.cached_radial_ball_mass(b);
  std::vector<std::pair<std::size_t, double>> hits;
  mu.atoms_in_ball(b, hits);
  std::sort(hits.begin(), hits.end());
  const auto& ws = mu.atom_weights();
  double sum = 0.0;
  for (const auto& h : hits) sum += ws[h.first];
  return sum;
}

double mu_hat(const Measure& mu, const Point& z, double r, double exponent) {
  const KobayashiBall b(z, r);
  const double mass = ball_mass(mu, b);
  if (mass == 0.0) return 0.0;
  return mass / std::pow(ball_volume_closed_form(mu.domain(), b), exponent);
}

CarlesonParams::CarlesonParams(double l, double g, double radius) : lambda(l), gamma(g), r(radius) {
  if (!(radius > 0.0 && radius < 1.0)) throw ParameterError("Carleson radius r must lie in (0, 1)");
}

// ---------------------------------------------------------------------------
// Berezin transforms

bool berezin_divergence_warning(int n, double s, double t) { return s * (n + 1) / 2.0 >= n + 1 + t; }

BerezinValue berezin_transform(const Measure& mu, const Point& z, double s, const QuadratureRule& rule) {
  if (!(s > 0.0)) throw ParameterError("berezin_transform: level s must be positive");
  const int n = mu.domain().n;
  if (!(z.norm_sq() < 1.0)) throw DomainError("berezin_transform: point outside the ball");
  BerezinValue out;
  if (mu.is_discrete()) {
    const auto& pts = mu.atom_points();
    const auto& ws = mu.atom_weights();
    for (std::size_t i = 0; i < pts.size(); ++i) out.value += ws[i] * normalized_kernel_power(n, z, pts[i], s);
    return out;
  }
  if (rule.domain.weight != mu.domain().weight || rule.domain.n != n)
    throw ParameterError("berezin_transform: rule and measure use different domains");
  const RadialDensity& rd = mu.density();
  const double outer2 = rd.outer_radius * rd.outer_radius;
  const Estimate e = integrate(
      rule,
      [&](const Point& w) {
        if (rd.outer_radius < 1.0 && w.norm_sq() >= outer2) return 0.0;
        return normalized_kernel_power(n, z, w, s);
      },
      rd.t);
  out.value = rd.scale * e.value;
  out.error = rd.scale * e.error;
  out.divergence_warning = berezin_divergence_warning(n, s, rd.t);
  return out;
}

BerezinValue berezin_value(const Measure& mu, const Point& z, double s) {
  if (!(s > 0.0)) throw ParameterError("berezin_value: level s must be positive");
  const ModelDomain& d = mu.domain();
  if (mu.is_discrete()) return berezin_transform(mu, z, s, QuadratureRule{});
  const RadialDensity& rd = mu.density();
  if (d.weight == WeightConvention::smooth && rd.outer_radius >= 1.0) {
    const double z2 = z.norm_sq();
    if (!(z2 < 1.0)) throw DomainError("berezin_value: point outside the ball");
    const double sigma = s * (d.n + 1) / 2.0;
    BerezinValue out;
    out.value = rd.scale * std::pow(kernel_constant_closed_form(d.n, 0.0), s / 2.0) * std::pow(1.0 - z2, sigma) *
                kernel_power_integral(d.n, sigma, rd.t, z2);
    out.divergence_warning = berezin_divergence_warning(d.n, s, rd.t);
    return out;
  }
  if (d.n == 1) {
    PolarRuleOptions o;
    o.focus = {z};
    o.embedded = false;
    o.radial_levels = static_cast<int>(std::ceil(std::log2(1.0 / (1.0 - z.norm())))) + 30;
    return berezin_transform(mu, z, s, polar_rule(d, o));
  }
  return berezin_transform(mu, z, s, qmc_rule(d, 20000, 8, 11));
}

// ---------------------------------------------------------------------------
// Skew Carleson diagnostics

std::vector<Point> sweep_grid(const Measure& mu, const SweepOptions& options) {
  const ModelDomain& d = mu.domain();
  const std::vector<Point> base = radial_grid(d, options.grid_count, options.delta_min, options.delta_max);
  if (mu.is_radial() || options.angular_copies <= 1) return base;
  std::vector<Point> out;
  out.reserve(base.size() * options.angular_copies);
  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (std::size_t c = 0; c < options.angular_copies; ++c) {
    Point dir;
    if (d.n == 1) {
      dir = Point(std::polar(1.0, 2.0 * kPi * c / options.angular_copies));
    } else if (c == 0) {
      dir = axis_point(d.n, 1.0);
    } else {
      std::vector<cplx> v(d.n);
      for (auto& x : v) x = cplx(normal(rng), normal(rng));
      dir = along(Point(std::move(v)), 1.0);
    }
    for (const Point& p : base) out.push_back(along(dir, p.norm()));
  }
  return out;
}

SkewNorm skew_carleson_norm(const Measure& mu, const CarlesonParams& cp, const std::vector<Point>& grid) {
  check_lambda(cp);
  if (grid.empty()) throw ParameterError("skew_carleson_norm: empty grid");
  const ModelDomain& d = mu.domain();
  SkewNorm out;
  out.points = grid.size();
  out.deepest_delta = INFINITY;
  for (const Point& z : grid) out.deepest_delta = std::min(out.deepest_delta, boundary_distance(d, z));
  const double gl = cp.gamma * cp.lambda;
  if (cp.lambda >= 1.0) {
    const auto samples = evaluate_on(grid, d, [&](const Point& z) {
      return mu_hat(mu, z, cp.r, cp.lambda) * std::pow(boundary_distance(d, z), -gl);
    });
    for (const auto& s : samples) out.value = std::max(out.value, s.value);
    return out;
  }
  out.sup_branch = false;
  const double q = 1.0 / (1.0 - cp.lambda);
  const auto shells = lq_shells(mu, out.deepest_delta, q, [&](const Point& z) {
    return mu_hat(mu, z, cp.r, 1.0) * std::pow(boundary_distance(d, z), -gl);
  }, SweepOptions{});
  double total = 0.0;
  for (const auto& s : shells) total += s.value;
  out.value = std::pow(total, 1.0 / q);
  return out;
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::carleson: return "carleson";
    case Verdict::vanishing: return "vanishing";
    case Verdict::not_carleson: return "not_carleson";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

Classification classify_skew_carleson(const Measure& mu, const CarlesonParams& cp, const SweepOptions& options) {
  check_lambda(cp);
  const ModelDomain& d = mu.domain();
  const double gl = cp.gamma * cp.lambda;
  if (cp.lambda >= 1.0) {
    const std::vector<Point> grid = sweep_grid(mu, options);
    const auto samples = evaluate_on(grid, d, [&](const Point& z) {
      return mu_hat(mu, z, cp.r, cp.lambda) * std::pow(boundary_distance(d, z), -gl);
    });
    return sup_classification(samples, options);
  }
  const double q = 1.0 / (1.0 - cp.lambda);
  const auto shells = lq_shells(mu, options.delta_min, q, [&](const Point& z) {
    return mu_hat(mu, z, cp.r, 1.0) * std::pow(boundary_distance(d, z), -gl);
  }, options);
  return shell_integral_classification(shells, q, options.delta_min, options);
}

Classification lattice_diagnostic(const Measure& mu, const CarlesonParams& cp, const Lattice& lattice,
                                  const SweepOptions& options) {
  check_lambda(cp);
  const ModelDomain& d = mu.domain();
  const double power = cp.lambda * cp.theta(d.n);
  const auto samples = evaluate_on(lattice.centers, d, [&](const Point& a) { return mu_hat(mu, a, cp.r, power); });
  if (cp.lambda >= 1.0) {
    Classification c = sup_classification(samples, options);
    c.deepest_delta = lattice.boundary_cutoff;
    if (c.verdict == Verdict::inconclusive && c.diagnostic.find("1e-2") != std::string::npos)
      c.diagnostic += " (lattice cutoff)";
    return c;
  }
  // l^q norm: sums of the q-th powers over the centers of each dyadic shell.
  const double q = 1.0 / (1.0 - cp.lambda);
  std::map<int, std::pair<double, double>> shells;  // k -> (sum, count-weighted log delta)
  std::map<int, int> counts;
  for (const auto& s : samples) {
    const int k = static_cast<int>(std::floor(std::log2(1.0 / s.delta)));
    shells[k].first += std::pow(s.value, q);
    shells[k].second += std::log(s.delta);
    counts[k] += 1;
  }
  std::vector<ShellSample> list;
  for (const auto& [k, v] : shells) list.push_back({std::exp(v.second / counts[k]), v.first});
  // The deepest shell is cut by the lattice truncation; leave it out of the fit.
  Classification c = shell_integral_classification(list, q, lattice.boundary_cutoff, options);
  if (list.size() >= 4) {
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i + 1 < list.size(); ++i) {
      if (list[i].delta <= options.fit_delta_max && list[i].value > 0.0) {
        xs.push_back(list[i].delta);
        ys.push_back(list[i].value);
      }
    }
    if (xs.size() >= 3 && c.verdict != Verdict::inconclusive) {
      c.fit = fit_power_law(xs, ys);
      if (c.fit.exponent > options.slope_tolerance) c.verdict = Verdict::vanishing;
      else if (c.fit.exponent < -options.slope_tolerance) c.verdict = Verdict::not_carleson;
      else c.verdict = Verdict::inconclusive;
    }
  }
  return c;
}

double default_berezin_level(int n, const CarlesonParams& cp) {
  const double lt = cp.lambda * cp.theta(n);
  if (cp.lambda >= 1.0) return 2.0 * std::ceil(lt);
  const double threshold = lt + static_cast<double>(n) / (n + 1) * (1.0 - cp.lambda);
  return 2.0 * (std::floor(threshold / 2.0) + 1.0);
}

Classification berezin_diagnostic(const Measure& mu, const CarlesonParams& cp, double s,
                                  const SweepOptions& options) {
  check_lambda(cp);
  const ModelDomain& d = mu.domain();
  const int n = d.n;
  if (s == 0.0) s = default_berezin_level(n, cp);
  const double lt = cp.lambda * cp.theta(n);
  if (cp.lambda >= 1.0) {
    if (!(s > lt)) throw ParameterError("berezin_diagnostic: level s must exceed lambda * theta");
    const std::vector<Point> grid = sweep_grid(mu, options);
    const auto samples = evaluate_on(grid, d, [&](const Point& z) {
      return std::pow(boundary_distance(d, z), (n + 1) * (s / 2.0 - lt)) * berezin_value(mu, z, s).value;
    });
    return sup_classification(samples, options);
  }
  const double threshold = lt + static_cast<double>(n) / (n + 1) * (1.0 - cp.lambda);
  if (!(s > threshold))
    throw ParameterError("berezin_diagnostic: level s must exceed lambda theta + n/(n+1) (1 - lambda)");
  const double q = 1.0 / (1.0 - cp.lambda);
  const double e = -(n + 1) * (lt - s / 2.0 + (1.0 - cp.lambda));
  const auto shells = lq_shells(mu, options.delta_min, q, [&](const Point& z) {
    return std::pow(boundary_distance(d, z), e) * berezin_value(mu, z, s).value;
  }, options);
  return shell_integral_classification(shells, q, options.delta_min, options);
}

Measure reweight(const Measure& mu, double beta) {
  const ModelDomain& d = mu.domain();
  if (beta == 0.0) return mu;
  if (mu.is_radial()) {
    const RadialDensity& rd = mu.density();
    if (!(rd.t + beta > -1.0)) throw ParameterError("reweight: t + beta must exceed -1 for a finite measure");
    return Measure::radial_density(d, rd.t + beta, rd.scale, rd.outer_radius);
  }
  std::vector<double> ws = mu.atom_weights();
  const auto& pts = mu.atom_points();
  for (std::size_t i = 0; i < ws.size(); ++i) {
    ws[i] *= std::pow(boundary_distance(d, pts[i]), beta);
    if (!std::isfinite(ws[i]) || !(ws[i] > 0.0)) throw ParameterError("reweight: resulting weight is not finite");
  }
  if (const auto* l = std::get_if<LatticeWeighted>(&mu.kind())) return Measure::lattice_weighted(d, l->lattice, ws);
  return Measure::atomic(d, pts, ws);
}

ProductTestResult product_carleson_test(const Measure& mu, const std::vector<ProductFamily>& families,
                                        std::size_t trials, const SweepOptions& options) {
  const ModelDomain& d = mu.domain();
  const int n = d.n;
  if (families.empty()) throw ParameterError("product_carleson_test: no function families");
  if (trials < 2) throw ParameterError("product_carleson_test: need at least two trials");
  ProductTestResult out;
  std::vector<ProductFamily> fam = families;
  double weighted_alpha = 0.0;
  double kernel_power_total = 0.0;
  for (ProductFamily& f : fam) {
    if (!(f.p > 0.0) || !(f.q > 0.0) || !(f.alpha > -1.0))
      throw ParameterError("product_carleson_test: inadmissible exponents (need p, q > 0 and alpha > -1)");
    if (f.kind == ProductFamily::Kind::kernel_power) {
      if (f.sigma == 0.0) f.sigma = 2.0 * (n + 1 + f.alpha) / ((n + 1) * f.p) + 1.0;
      if (!(f.sigma * f.p * (n + 1) > n + 1 + f.alpha))
        throw ParameterError("product_carleson_test: inadmissible exponents (need sigma p (n+1) > n+1+alpha)");
      kernel_power_total += f.sigma * f.q;
    }
    out.lambda += f.q / f.p;
    weighted_alpha += f.alpha * f.q / f.p;
  }
  out.gamma = weighted_alpha / out.lambda;
  const std::vector<Point> centers = radial_grid(d, trials, options.delta_min, options.delta_max);
  out.deltas.resize(centers.size());
  out.ratios.resize(centers.size());
  parallel_for(centers.size(), [&](std::size_t i) {
    const Point& a = centers[i];
    // The normalizing factors delta(a)^(r_j) cancel between numerator and denominator.
    const double num = kernel_power_total > 0.0 ? berezin_value(mu, a, kernel_power_total).value : mu.total_mass();
    double den = 1.0;
    for (const ProductFamily& f : fam) {
      const Measure weight = Measure::radial_density(d, f.alpha);
      const double np = f.kind == ProductFamily::Kind::kernel_power ? berezin_value(weight, a, f.sigma * f.p).value
                                                                    : weight.total_mass();
      den *= std::pow(np, f.q / f.p);
    }
    out.deltas[i] = boundary_distance(d, a);
    out.ratios[i] = num / den;
  });
  out.max_ratio = *std::max_element(out.ratios.begin(), out.ratios.end());
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < centers.size(); ++i) {
    if (out.deltas[i] <= options.fit_delta_max && out.ratios[i] > 0.0) {
      xs.push_back(out.deltas[i]);
      ys.push_back(out.ratios[i]);
    }
  }
  if (xs.size() >= 2) {
    out.fit = fit_power_law(xs, ys);
    out.bounded = out.fit.exponent >= -options.slope_tolerance;
  } else {
    out.fit.exponent = NAN;
    out.bounded = true;
  }
  return out;
}

}  // namespace toeplab
