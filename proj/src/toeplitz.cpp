#include "toeplab/toeplitz.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "toeplab/errors.hpp"
#include "toeplab/special.hpp"

namespace toeplab {

namespace {

constexpr double kPi = std::numbers::pi;

// log of scale * |S| * int_0^R rho^(2k+2n-1) delta(rho)^t drho.
double log_radial_moment(const ModelDomain& d, const RadialDensity& rd, int k) {
  const int n = d.n;
  const double m = 2.0 * k + 2.0 * n;
  if (rd.outer_radius >= 1.0) {
    if (d.weight == WeightConvention::smooth)
      return std::log(rd.scale) + n * std::log(kPi) - std::lgamma(n) + std::lgamma(k + n) + std::lgamma(rd.t + 1.0) -
             std::lgamma(k + n + rd.t + 1.0);
    return std::log(rd.scale) + std::log(d.sphere_area()) + std::lgamma(m) + std::lgamma(rd.t + 1.0) -
           std::lgamma(m + rd.t + 1.0);
  }
  // rho = R u; the factor u^(m-1) concentrates at u = 1, so panels are dyadic in 1 - u.
  const double R = rd.outer_radius;
  const GaussRule& gl = gauss_legendre(20);
  double sum = 0.0;
  for (int j = 0; j < 60; ++j) {
    const double hi = std::ldexp(1.0, -j), lo = std::ldexp(1.0, -j - 1);
    const double half = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
    for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
      const double u = 1.0 - (mid + half * gl.nodes[i]);
      const double delta = delta_from_smooth(1.0 - R * R * u * u, d.weight);
      sum += half * gl.weights[i] * std::pow(u, m - 1.0) * std::pow(delta, rd.t);
    }
  }
  return std::log(rd.scale) + std::log(d.sphere_area()) + m * std::log(R) + std::log(sum);
}

cplx monomial_value(const MonomialTerm& m, const Point& z) {
  cplx v = m.coefficient;
  for (std::size_t i = 0; i < m.powers.size(); ++i)
    if (m.powers[i] != 0) v *= std::pow(z[i], m.powers[i]);
  return v;
}

double center_depth(const Point& a) { return std::ceil(std::log2(1.0 / (1.0 - a.norm()))); }

SandwichSide fit_side(const std::vector<double>& deltas, const std::vector<double>& values, double fit_max,
                      double tol) {
  SandwichSide s;
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < values.size(); ++i) {
    s.value = std::max(s.value, values[i]);
    if (deltas[i] <= fit_max && values[i] > 0.0) {
      xs.push_back(deltas[i]);
      ys.push_back(values[i]);
    }
  }
  if (xs.size() < 2) {
    s.fit.exponent = NAN;
    s.bounded = true;
    return s;
  }
  s.fit = fit_power_law(xs, ys);
  s.bounded = s.fit.exponent >= -tol;
  return s;
}

}  // namespace

// ---------------------------------------------------------------------------
// Parameters

OperatorParams derive_params(int n, double p1, double alpha1, double p2, double alpha2, double beta) {
  if (n < 1) throw ParameterError("derive_params: dimension must be positive");
  if (!(p1 > 0.0) || !(p2 > 0.0)) throw ParameterError("derive_params: exponents p1, p2 must be positive");
  if (!(alpha1 > -1.0) || !(alpha2 > -1.0)) throw ParameterError("derive_params: alpha1, alpha2 must exceed -1");
  if (!(beta > -1.0)) throw ParameterError("derive_params: beta must exceed -1");
  OperatorParams op;
  op.n = n;
  op.p1 = p1;
  op.alpha1 = alpha1;
  op.p2 = p2;
  op.alpha2 = alpha2;
  op.beta = beta;
  op.lambda = 1.0 + 1.0 / p1 - 1.0 / p2;
  op.lambda_zero = std::abs(op.lambda) <= 1e-12;
  op.gamma = op.lambda_zero ? NAN : (beta + alpha1 / p1 - alpha2 / p2) / op.lambda;
  auto holds = [&](double p, double a) { return n + 1 + beta > n * std::max(1.0, 1.0 / p) + (1.0 + a) / p; };
  op.hypothesis1 = holds(p1, alpha1);
  op.hypothesis2 = holds(p2, alpha2);
  return op;
}

// ---------------------------------------------------------------------------
// Test functions

int MonomialTerm::degree() const {
  int d = 0;
  for (int p : powers) d += p;
  return d;
}

TestFunction::TestFunction(int n, double beta) : kp_(n, beta) {}

TestFunction TestFunction::kernel(int n, double beta, const Point& center, cplx coefficient) {
  TestFunction f(n, beta);
  f.add(KernelTerm{coefficient, center});
  return f;
}

TestFunction TestFunction::monomial(int n, double beta, std::vector<int> powers, cplx coefficient) {
  TestFunction f(n, beta);
  f.add(MonomialTerm{coefficient, std::move(powers)});
  return f;
}

TestFunction& TestFunction::add(KernelTerm term) {
  if (static_cast<int>(term.center.dim()) != kp_.n) throw ParameterError("test function: kernel center has the wrong dimension");
  if (!(term.center.norm_sq() < 1.0)) throw DomainError("test function: kernel center outside the ball");
  kernels_.push_back(std::move(term));
  return *this;
}

TestFunction& TestFunction::add(MonomialTerm term) {
  if (static_cast<int>(term.powers.size()) != kp_.n) throw ParameterError("test function: monomial has the wrong dimension");
  for (int p : term.powers)
    if (p < 0) throw ParameterError("test function: negative monomial power");
  monomials_.push_back(std::move(term));
  return *this;
}

TestFunction TestFunction::scaled(cplx factor) const {
  TestFunction f = *this;
  for (auto& k : f.kernels_) k.coefficient *= factor;
  for (auto& m : f.monomials_) m.coefficient *= factor;
  return f;
}

cplx TestFunction::operator()(const Point& z) const {
  cplx v = 0.0;
  for (const auto& k : kernels_) v += k.coefficient * bergman_kernel(kp_, z, k.center);
  for (const auto& m : monomials_) v += monomial_value(m, z);
  return v;
}

// ---------------------------------------------------------------------------
// Toeplitz images

struct ToeplitzImage::Radial {
  bool identity = false;     // t = beta on the untruncated smooth density: T = scale * I
  bool closed_form = false;  // untruncated smooth density: hypergeometric kernel image
  double scale = 1.0;
  double prefactor = 0.0;
  double euler_exponent = 0.0;
  double hyp_a = 0.0, hyp_c = 0.0;
  std::vector<double> series;                      // kernel image coefficients of <z, a>^k
  std::vector<double> multipliers;                 // eigenvalue on homogeneous polynomials of degree k
};

ToeplitzImage::ToeplitzImage(const Measure& mu, const TestFunction& f) : mu_(mu), f_(f) {
  const ModelDomain& d = mu.domain();
  const KernelParams& kp = f.kernel_params();
  if (d.n != kp.n) throw ParameterError("apply_toeplitz: measure and function dimensions differ");
  if (mu.is_discrete()) {
    const auto& pts = mu.atom_points();
    const auto& ws = mu.atom_weights();
    atom_coefficients_.resize(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) atom_coefficients_[i] = ws[i] * f(pts[i]);
    return;
  }
  const RadialDensity& rd = mu.density();
  const int n = d.n;
  const double s = kp.order();
  auto r = std::make_shared<Radial>();
  r->scale = rd.scale;
  const bool smooth_full = d.weight == WeightConvention::smooth && rd.outer_radius >= 1.0;
  r->identity = smooth_full && rd.t == kp.beta;
  r->closed_form = smooth_full;
  if (smooth_full) {
    r->prefactor = kp.constant * kp.constant * rd.scale * std::pow(kPi, n) *
                   std::exp(std::lgamma(rd.t + 1.0) - std::lgamma(n + 1.0 + rd.t));
    r->euler_exponent = n + 1.0 + rd.t - 2.0 * s;
    r->hyp_a = rd.t - kp.beta;
    r->hyp_c = n + 1.0 + rd.t;
  }
  const double log_c = std::log(kp.constant);
  auto log_multiplier = [&](int k) {
    return log_c + log_pochhammer(s, k) + std::lgamma(n) - std::lgamma(n + k) + log_radial_moment(d, rd, k);
  };
  int max_degree = -1;
  for (const auto& m : f.monomials()) max_degree = std::max(max_degree, m.degree());
  for (int k = 0; k <= max_degree; ++k) r->multipliers.push_back(std::exp(log_multiplier(k)));
  if (!smooth_full && !f.kernels().empty()) {
    // T K_a(z) = sum_k c m_k (s)_k / k! <z, a>^k; tabulate until the terms are
    // negligible for the largest |<z, a>| that can occur.
    double amax = 0.0;
    for (const auto& k : f.kernels()) amax = std::max(amax, k.center.norm());
    const double log_x = std::log(amax);
    double peak = -INFINITY;
    for (int k = 0;; ++k) {
      const double lb = log_c + log_pochhammer(s, k) - std::lgamma(k + 1.0) + log_multiplier(k);
      r->series.push_back(std::exp(lb));
      const double lt = lb + k * log_x;
      peak = std::max(peak, lt);
      if (k > 8 && lt < peak - 45.0) break;
      if (k > 4'000'000) throw ResourceError("apply_toeplitz: kernel series needs more than 4e6 terms");
    }
  }
  radial_ = std::move(r);
}

cplx ToeplitzImage::operator()(const Point& z) const {
  const KernelParams& kp = f_.kernel_params();
  if (!radial_) {
    const auto& pts = mu_.atom_points();
    cplx v = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) v += atom_coefficients_[i] * bergman_kernel(kp, z, pts[i]);
    return v;
  }
  const Radial& r = *radial_;
  if (r.identity) return r.scale * f_(z);
  cplx v = 0.0;
  for (const auto& m : f_.monomials()) v += r.multipliers[m.degree()] * monomial_value(m, z);
  for (const auto& k : f_.kernels()) {
    const cplx x = inner(z, k.center);
    if (r.closed_form) {
      v += k.coefficient * r.prefactor * std::pow(1.0 - x, r.euler_exponent) * hyp2f1(r.hyp_a, r.hyp_a, r.hyp_c, x);
      continue;
    }
    cplx sum = 0.0, xk = 1.0;
    double prev = INFINITY;
    for (std::size_t j = 0; j < r.series.size(); ++j) {
      const cplx term = r.series[j] * xk;
      sum += term;
      const double mag = std::abs(term);
      if (j > 8 && mag < prev && mag <= 1e-17 * std::abs(sum)) break;
      prev = mag;
      xk *= x;
    }
    v += k.coefficient * sum;
  }
  return v;
}

cplx apply_toeplitz(const Measure& mu, const TestFunction& f, const Point& z) {
  if (!(z.norm_sq() < 1.0)) throw DomainError("apply_toeplitz: point outside the ball");
  return ToeplitzImage(mu, f)(z);
}

ComplexEstimate apply_toeplitz(const Measure& mu, double beta, const Function& f, const Point& z,
                               const QuadratureRule& rule, double growth) {
  const KernelParams kp(mu.domain().n, beta);
  if (!(z.norm_sq() < 1.0)) throw DomainError("apply_toeplitz: point outside the ball");
  ComplexEstimate out;
  if (mu.is_discrete()) {
    const auto& pts = mu.atom_points();
    const auto& ws = mu.atom_weights();
    for (std::size_t i = 0; i < pts.size(); ++i) out.value += ws[i] * bergman_kernel(kp, z, pts[i]) * f(pts[i]);
    return out;
  }
  const RadialDensity& rd = mu.density();
  if (!(rd.t - growth > -1.0))
    throw DivergenceError("apply_toeplitz: integral diverges, density exponent t minus growth of f is <= -1");
  if (rule.domain.weight != mu.domain().weight || rule.domain.n != mu.domain().n)
    throw ParameterError("apply_toeplitz: rule and measure use different domains");
  const double outer2 = rd.outer_radius * rd.outer_radius;
  out = integrate_complex(
      rule,
      [&](const Point& w) -> cplx {
        if (rd.outer_radius < 1.0 && w.norm_sq() >= outer2) return 0.0;
        return bergman_kernel(kp, z, w) * f(w);
      },
      rd.t);
  out.value *= rd.scale;
  out.error *= rd.scale;
  return out;
}

// ---------------------------------------------------------------------------
// Probes

std::vector<Point> boundary_centers(int n, const ProbeOptions& options) {
  if (options.levels < 1) throw ParameterError("boundary centers: need at least one level");
  const Point dir = options.direction.dim() == 0 ? axis_point(n, 1.0) : options.direction;
  if (static_cast<int>(dir.dim()) != n) throw ParameterError("boundary centers: direction has the wrong dimension");
  std::vector<Point> out;
  for (int k = 1; k <= options.levels; ++k) out.push_back(along(dir, 1.0 - std::ldexp(1.0, -k)));
  return out;
}

QuadratureRule probe_rule(const ModelDomain& d, const std::vector<Point>& centers, int extra_levels) {
  if (d.n == 1) {
    PolarRuleOptions o;
    o.focus = centers;
    double depth = 0.0;
    for (const Point& a : centers) depth = std::max(depth, center_depth(a));
    o.radial_levels = static_cast<int>(depth) + extra_levels;
    o.embedded = false;
    return polar_rule(d, o);
  }
  return qmc_rule(d, 16384, 8, 29, 2.0);
}

LowerProbe lower_bound_probe(const Measure& mu, const OperatorParams& op, const Point& a, double r) {
  if (op.lambda_zero || op.lambda < 1.0)
    throw BranchError("lower_bound_probe: requires lambda >= 1; use the lattice diagnostic for lambda < 1");
  const ModelDomain& d = mu.domain();
  if (d.n != op.n) throw ParameterError("lower_bound_probe: measure and operator dimensions differ");
  LowerProbe p;
  p.center = a;
  p.delta = boundary_distance(d, a);
  p.ball_mass = ball_mass(mu, KobayashiBall(a, r));
  p.value = p.ball_mass / std::pow(p.delta, (op.n + 1 + op.gamma) * op.lambda);
  const TestFunction fa = TestFunction::kernel(op.n, op.beta, a);
  p.kernel_action = apply_toeplitz(mu, fa, a).real();
  const KernelParams& kp = fa.kernel_params();
  if (d.weight == WeightConvention::smooth) {
    p.kernel_norm = kp.constant * std::pow(kernel_power_integral(op.n, kp.order() * op.p1 / 2.0, op.alpha1, a.norm_sq()),
                                           1.0 / op.p1);
  } else {
    p.kernel_norm = norm(fa, SpaceParams(op.p1, op.alpha1), probe_rule(d, {a}, 22)).value;
  }
  return p;
}

const char* to_string(ProbeFamily family) {
  switch (family) {
    case ProbeFamily::kernel_probe: return "kernel_probe";
    case ProbeFamily::atom_probe: return "atom_probe";
    case ProbeFamily::vanishing_probe: return "vanishing_probe";
    case ProbeFamily::polynomial: return "polynomial";
  }
  return "kernel_probe";
}

ProbeFamily probe_family_from_string(const std::string& name) {
  for (ProbeFamily f : {ProbeFamily::kernel_probe, ProbeFamily::atom_probe, ProbeFamily::vanishing_probe,
                        ProbeFamily::polynomial})
    if (name == to_string(f)) return f;
  throw ParameterError("unknown probe family '" + name + "'");
}

NormEstimate estimate_operator_norm(const Measure& mu, const OperatorParams& op, ProbeFamily family,
                                    std::size_t trials, const ProbeOptions& options) {
  const ModelDomain& d = mu.domain();
  const int n = d.n;
  if (n != op.n) throw ParameterError("estimate_operator_norm: measure and operator dimensions differ");
  if (trials < 1) throw ParameterError("estimate_operator_norm: trials must be at least 1");
  const SpaceParams in(op.p1, op.alpha1), out_space(op.p2, op.alpha2);
  NormEstimate est;

  auto run = [&](const std::string& label, const TestFunction& f, double delta, const std::vector<Point>& focus) {
    const QuadratureRule rule = probe_rule(d, focus, options.extra_levels);
    const Estimate fin = norm(f, in, rule);
    if (!(fin.value > 0.0) || !std::isfinite(fin.value)) {
      ++est.skipped;
      est.diagnostics.push_back(label + ": test function has zero or non-finite norm, skipped");
      return;
    }
    const ToeplitzImage image(mu, f);
    const Estimate fout = norm([&image](const Point& z) { return image(z); }, out_space, rule);
    ProbeRecord rec;
    rec.label = label;
    rec.delta = delta;
    rec.input_norm = fin.value;
    rec.output_norm = fout.value;
    rec.ratio = fout.value / fin.value;
    rec.error = fout.error;
    est.value = std::max(est.value, rec.ratio);
    est.probes.push_back(std::move(rec));
  };

  switch (family) {
    case ProbeFamily::kernel_probe:
    case ProbeFamily::vanishing_probe: {
      const double e = (n + 1 + op.beta) - (n + 1 + op.alpha1) / op.p1;
      for (const Point& a : boundary_centers(n, options)) {
        const double delta = boundary_distance(d, a);
        TestFunction f = TestFunction::kernel(n, op.beta, a);
        if (family == ProbeFamily::vanishing_probe) f = f.scaled(std::pow(delta, e));
        run(std::string(to_string(family)) + "[" + std::to_string(static_cast<int>(center_depth(a))) + "]", f, delta,
            {a});
      }
      break;
    }
    case ProbeFamily::atom_probe: {
      const double tau = (n + 1 + op.beta) / 2.0 - (n + 1 + op.alpha1) / op.p1;
      std::mt19937_64 rng(options.seed);
      std::uniform_real_distribution<double> unif(0.0, 1.0);
      std::normal_distribution<double> normal(0.0, 1.0);
      for (std::size_t t = 0; t < trials; ++t) {
        TestFunction f(n, op.beta);
        std::vector<Point> centers;
        std::vector<cplx> coeffs;
        double lp = 0.0;
        for (int k = 1; k <= options.levels; ++k) {
          Point dir;
          if (n == 1) {
            dir = Point(std::polar(1.0, 2.0 * kPi * unif(rng)));
          } else {
            std::vector<cplx> v(n);
            for (auto& x : v) x = cplx(normal(rng), normal(rng));
            dir = Point(std::move(v));
          }
          centers.push_back(along(dir, 1.0 - std::ldexp(1.0, -k)));
          const cplx c = std::polar(0.1 + 0.9 * unif(rng), 2.0 * kPi * unif(rng));
          coeffs.push_back(c);
          lp += std::pow(std::abs(c), op.p1);
        }
        const double norm_c = std::pow(lp, 1.0 / op.p1);
        const KernelParams& kp = f.kernel_params();
        for (std::size_t k = 0; k < centers.size(); ++k) {
          const Point& a = centers[k];
          const double w = std::pow(boundary_distance(d, a), tau) / std::sqrt(kernel_diagonal(kp, a));
          f.add(KernelTerm{coeffs[k] / norm_c * w, a});
        }
        run("atom_probe[" + std::to_string(t) + "]", f, NAN, centers);
      }
      break;
    }
    case ProbeFamily::polynomial: {
      for (std::size_t k = 0; k < trials; ++k) {
        std::vector<int> powers(n, 0);
        powers[0] = static_cast<int>(k);
        run("polynomial[" + std::to_string(k) + "]", TestFunction::monomial(n, op.beta, powers), NAN, {});
      }
      break;
    }
  }
  return est;
}

CompactnessResult compactness_probe(const Measure& mu, const OperatorParams& op, const ProbeOptions& options) {
  CompactnessResult res;
  if (op.lambda_zero) {
    res.diagnostic = "lambda = 0: no verdict in this regime";
    return res;
  }
  if (op.lambda < 1.0) {
    res.verdict = Verdict::vanishing;
    res.fit.exponent = NAN;
    res.diagnostic = "lambda < 1: bounded and compact coincide";
    return res;
  }
  const NormEstimate est = estimate_operator_norm(mu, op, ProbeFamily::vanishing_probe, 1, options);
  for (const auto& p : est.probes) {
    res.deltas.push_back(p.delta);
    res.norms.push_back(p.output_norm);
  }
  std::vector<double> xs, ys;
  bool any = false;
  for (std::size_t i = 0; i < res.norms.size(); ++i) {
    if (res.norms[i] > 0.0) any = true;
    if (res.deltas[i] <= options.fit_delta_max && res.norms[i] > 0.0) {
      xs.push_back(res.deltas[i]);
      ys.push_back(res.norms[i]);
    }
  }
  if (!any && !res.norms.empty()) {
    res.verdict = Verdict::vanishing;
    res.fit.exponent = NAN;
    res.diagnostic = "T f_k vanishes identically";
    return res;
  }
  if (xs.size() < 3) {
    res.diagnostic = "fewer than three centers in the fit range";
    return res;
  }
  res.fit = fit_power_law(xs, ys);
  if (res.fit.exponent > options.slope_tolerance) {
    res.verdict = Verdict::vanishing;
    res.diagnostic = "||T f_k|| decays: compact";
  } else if (res.fit.exponent >= -options.slope_tolerance) {
    res.verdict = Verdict::carleson;
    res.diagnostic = "||T f_k|| neither decays nor grows: bounded, not compact";
  } else {
    res.verdict = Verdict::not_carleson;
    res.diagnostic = "||T f_k|| grows: unbounded";
  }
  return res;
}

Sandwich run_sandwich(const Measure& mu, const OperatorParams& op, const ProbeOptions& options,
                      const SweepOptions& sweep) {
  if (op.lambda_zero) throw BranchError("run_sandwich: lambda = 0 has no skew Carleson counterpart");
  const ModelDomain& d = mu.domain();
  Sandwich s;
  const std::vector<Point> centers = boundary_centers(d.n, options);
  std::vector<double> deltas, values;
  if (op.lambda >= 1.0) {
    for (const Point& a : centers) {
      s.lower_probes.push_back(lower_bound_probe(mu, op, a, options.r));
      deltas.push_back(s.lower_probes.back().delta);
      values.push_back(s.lower_probes.back().value);
    }
    s.lower = fit_side(deltas, values, options.fit_delta_max, options.slope_tolerance);
  } else {
    s.lower.value = NAN;
    s.lower.fit.exponent = NAN;
  }
  s.norm = estimate_operator_norm(mu, op, ProbeFamily::kernel_probe, 1, options);
  deltas.clear();
  values.clear();
  for (const auto& p : s.norm.probes) {
    deltas.push_back(p.delta);
    values.push_back(p.ratio);
  }
  s.estimate = fit_side(deltas, values, options.fit_delta_max, options.slope_tolerance);
  const Classification c = classify_skew_carleson(mu, op.carleson(options.r), sweep);
  s.skew_verdict = c.verdict;
  s.skew.value = c.norm;
  s.skew.fit = c.fit;
  s.skew.bounded = c.verdict == Verdict::carleson || c.verdict == Verdict::vanishing;
  if (op.lambda < 1.0) s.lower.bounded = s.estimate.bounded;
  s.agree = s.lower.bounded == s.estimate.bounded && s.estimate.bounded == s.skew.bounded &&
            c.verdict != Verdict::inconclusive;
  std::vector<double> vals{s.estimate.value, s.skew.value};
  if (op.lambda >= 1.0) vals.push_back(s.lower.value);
  const auto [lo, hi] = std::minmax_element(vals.begin(), vals.end());
  s.spread = *lo > 0.0 ? *hi / *lo : INFINITY;
  return s;
}

}  // namespace toeplab
