#include "toeplab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "toeplab/special.hpp"

namespace toeplab {

namespace {

constexpr double kPi = std::numbers::pi;

struct Panel1D {
  std::vector<double> nodes;
  std::vector<double> weights;
  std::vector<double> embedded;
};

// Appends the GK15 (or G7) nodes of [lo, hi] mapped through the identity.
void add_panel(Panel1D& out, double lo, double hi, bool embedded) {
  const KronrodRule& gk = gauss_kronrod15();
  const double half = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
  for (int i = 0; i < 15; ++i) {
    if (!embedded && gk.gauss_weights[i] == 0.0) continue;
    out.nodes.push_back(mid + half * gk.nodes[i]);
    if (embedded) {
      out.weights.push_back(half * gk.kronrod_weights[i]);
      out.embedded.push_back(half * gk.gauss_weights[i]);
    } else {
      out.weights.push_back(half * gk.gauss_weights[i]);
    }
  }
}

std::vector<double> angular_breaks(const PolarRuleOptions& options) {
  const int panels = std::max(1, options.angular_panels);
  std::vector<double> breaks;
  for (int k = 0; k <= panels; ++k) breaks.push_back(2.0 * kPi * k / panels);
  for (const Point& f : options.focus) {
    if (f.dim() != 1) throw ParameterError("polar_rule: focus points must lie in the disk");
    const double m = std::abs(f[0]);
    if (!(m < 1.0)) throw DomainError("polar_rule: focus point outside the disk");
    double theta = std::arg(f[0]);
    if (theta < 0.0) theta += 2.0 * kPi;
    const double w0 = (1.0 - m) * options.focus_fraction;
    for (double w = w0; w < kPi; w *= 2.0) {
      for (double b : {theta - w, theta + w}) {
        double v = std::fmod(b, 2.0 * kPi);
        if (v < 0.0) v += 2.0 * kPi;
        breaks.push_back(v);
      }
    }
  }
  std::sort(breaks.begin(), breaks.end());
  std::vector<double> unique;
  for (double b : breaks) {
    if (unique.empty() || b - unique.back() > 1e-15) unique.push_back(b);
  }
  if (2.0 * kPi - unique.back() <= 1e-15) unique.back() = 2.0 * kPi;
  else unique.push_back(2.0 * kPi);
  return unique;
}

}  // namespace

const char* to_string(RuleKind kind) {
  switch (kind) {
    case RuleKind::tensor_polar: return "tensor_polar";
    case RuleKind::qmc: return "qmc";
    case RuleKind::monte_carlo: return "monte_carlo";
  }
  return "unknown";
}

std::string QuadratureRule::error_model() const {
  if (kind == RuleKind::tensor_polar)
    return embedded_weights.empty() ? "none" : "deterministic: |Kronrod 15 - Gauss 7| tensor difference";
  return "statistical: standard error over " + std::to_string(replicas) + " replicas";
}

QuadratureRule polar_rule(const ModelDomain& d, const PolarRuleOptions& options) {
  if (d.n != 1) throw ParameterError("polar_rule: tensor rules are available for n = 1; use qmc_rule");
  if (options.radial_levels < 1) throw ParameterError("polar_rule: radial_levels must be positive");
  // Radial panels in x = 1 - |z|.
  double xmin = 0.0;
  if (options.min_delta > 0.0) xmin = 1.0 - radius_for_delta(d, options.min_delta);
  Panel1D radial;
  for (int l = 0; l < options.radial_levels; ++l) {
    const double hi = std::ldexp(1.0, -l);
    double lo = std::ldexp(1.0, -l - 1);
    if (hi <= xmin) break;
    if (lo < xmin) lo = xmin;
    add_panel(radial, lo, hi, options.embedded);
  }
  Panel1D angular;
  const std::vector<double> breaks = angular_breaks(options);
  for (std::size_t k = 0; k + 1 < breaks.size(); ++k) add_panel(angular, breaks[k], breaks[k + 1], options.embedded);

  QuadratureRule rule;
  rule.domain = d;
  rule.kind = RuleKind::tensor_polar;
  const std::size_t total = radial.nodes.size() * angular.nodes.size();
  rule.nodes.reserve(total);
  rule.weights.reserve(total);
  rule.deltas.reserve(total);
  rule.smooth_deltas.reserve(total);
  if (options.embedded) rule.embedded_weights.reserve(total);
  std::vector<cplx> dirs(angular.nodes.size());
  for (std::size_t k = 0; k < dirs.size(); ++k) dirs[k] = std::polar(1.0, angular.nodes[k]);
  for (std::size_t i = 0; i < radial.nodes.size(); ++i) {
    const double x = radial.nodes[i];
    const double rho = 1.0 - x;
    const double ds = x * (2.0 - x);
    const double de = d.weight == WeightConvention::smooth ? ds : x;
    for (std::size_t k = 0; k < dirs.size(); ++k) {
      rule.nodes.emplace_back(rho * dirs[k]);
      rule.weights.push_back(radial.weights[i] * angular.weights[k] * rho);
      if (options.embedded) rule.embedded_weights.push_back(radial.embedded[i] * angular.embedded[k] * rho);
      rule.deltas.push_back(de);
      rule.smooth_deltas.push_back(ds);
    }
  }
  return rule;
}

QuadratureRule qmc_rule(const ModelDomain& d, std::size_t points_per_replica, std::size_t replicas,
                        std::uint64_t seed, double grading) {
  if (points_per_replica < 1 || replicas < 1) throw ParameterError("qmc_rule: need points and replicas");
  if (!(grading >= 1.0)) throw ParameterError("qmc_rule: grading must be at least 1");
  const int n = d.n;
  const std::size_t dims = 2 * static_cast<std::size_t>(n) + 1;
  const std::vector<unsigned> bases = first_primes(dims);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  QuadratureRule rule;
  rule.domain = d;
  rule.kind = RuleKind::qmc;
  rule.replicas = replicas;
  const double vol = d.volume();
  for (std::size_t rep = 0; rep < replicas; ++rep) {
    std::vector<double> shift(dims);
    for (double& s : shift) s = unif(rng);
    for (std::size_t i = 0; i < points_per_replica; ++i) {
      std::vector<double> u(dims);
      for (std::size_t k = 0; k < dims; ++k) {
        double v = radical_inverse(i + 1, bases[k]) + shift[k];
        if (v >= 1.0) v -= 1.0;
        u[k] = std::clamp(v, 1e-300, 1.0 - 1e-16);
      }
      std::vector<cplx> c(n);
      double nrm = 0.0;
      for (int k = 0; k < n; ++k) {
        const double rad = std::sqrt(-2.0 * std::log(u[2 * k]));
        c[k] = std::polar(rad, 2.0 * kPi * u[2 * k + 1]);
        nrm += std::norm(c[k]);
      }
      // 1 - |z|^2 = s = (1 - v)^grading; the volume density of t = |z|^2 is n t^(n-1).
      const double v = u[dims - 1];
      const double s = std::pow(1.0 - v, grading);
      const double t = 1.0 - s;
      const double density = (1.0 / grading) * std::pow(s, 1.0 / grading - 1.0);
      const double w = vol * n * std::pow(t, n - 1) / density / points_per_replica;
      const double scale = std::sqrt(t / nrm);
      for (cplx& z : c) z *= scale;
      rule.nodes.emplace_back(std::move(c));
      rule.weights.push_back(w);
      rule.smooth_deltas.push_back(s);
      rule.deltas.push_back(delta_from_smooth(s, d.weight));
    }
  }
  return rule;
}

QuadratureRule monte_carlo_rule(const ModelDomain& d, std::size_t points_per_replica,
                                std::size_t replicas, std::uint64_t seed) {
  if (points_per_replica < 1 || replicas < 1) throw ParameterError("monte_carlo_rule: need points and replicas");
  const int n = d.n;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  QuadratureRule rule;
  rule.domain = d;
  rule.kind = RuleKind::monte_carlo;
  rule.replicas = replicas;
  const double w = d.volume() / points_per_replica;
  for (std::size_t i = 0; i < points_per_replica * replicas; ++i) {
    std::vector<cplx> c(n);
    double nrm = 0.0;
    for (int k = 0; k < n; ++k) {
      const double re = normal(rng), im = normal(rng);
      c[k] = cplx(re, im);
      nrm += re * re + im * im;
    }
    const double t = std::pow(unif(rng), 1.0 / n);
    const double scale = std::sqrt(t / nrm);
    for (cplx& z : c) z *= scale;
    rule.nodes.emplace_back(std::move(c));
    rule.weights.push_back(w);
    rule.smooth_deltas.push_back(1.0 - t);
    rule.deltas.push_back(delta_from_smooth(1.0 - t, d.weight));
  }
  return rule;
}

}  // namespace toeplab
