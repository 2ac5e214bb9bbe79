#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "toeplab/errors.hpp"
#include "toeplab/geometry.hpp"
#include "toeplab/parallel.hpp"

namespace toeplab {

enum class RuleKind { tensor_polar, qmc, monte_carlo };

const char* to_string(RuleKind kind);

struct Estimate {
  double value = 0.0;
  double error = 0.0;  // NaN when the rule carries no error model
};

struct ComplexEstimate {
  cplx value = 0.0;
  double error = 0.0;
};

/// Nodes and positive weights for integrals against Lebesgue measure on the
/// ball. Deterministic rules may carry embedded weights of a lower-order
/// companion rule (zero where the companion has no node); the difference of the
/// two sums is the error estimate. Statistical rules consist of `replicas`
/// equally sized independent blocks, each a complete rule on its own.
struct QuadratureRule {
  ModelDomain domain;
  RuleKind kind = RuleKind::tensor_polar;
  std::vector<Point> nodes;
  std::vector<double> weights;
  std::vector<double> embedded_weights;
  std::vector<double> deltas;         // boundary distance in the domain convention
  std::vector<double> smooth_deltas;  // 1 - |node|^2, accurate near the boundary
  std::size_t replicas = 1;

  std::size_t size() const { return nodes.size(); }
  std::string error_model() const;
};

struct PolarRuleOptions {
  /// Radial panels are dyadic in 1 - |z| down to 2^-radial_levels.
  int radial_levels = 40;
  int angular_panels = 8;
  /// Points near which angular panels are refined dyadically.
  std::vector<Point> focus;
  /// Smallest angular panel around a focus a is (1 - |a|) * focus_fraction.
  double focus_fraction = 1.0 / 16.0;
  /// Restrict the rule to {delta >= min_delta} when positive.
  double min_delta = 0.0;
  /// Gauss-Kronrod 15 panels with a Gauss 7 error estimate; when false, plain
  /// Gauss 7 panels without an error estimate.
  bool embedded = true;
};

/// Tensor rule in polar coordinates on the disk (n = 1): Gauss-Kronrod panels
/// dyadically graded toward the boundary times angular panels.
QuadratureRule polar_rule(const ModelDomain& d, const PolarRuleOptions& options = {});

/// Randomly shifted Halton rule on the ball: directions from Box-Muller
/// transformed coordinates, radius graded toward the boundary by
/// 1 - |z|^2 = (1 - u)^grading. Each Cranley-Patterson shift is a replica.
QuadratureRule qmc_rule(const ModelDomain& d, std::size_t points_per_replica, std::size_t replicas,
                        std::uint64_t seed, double grading = 2.0);

/// Plain Monte Carlo rule, uniform in volume, split into replicas.
QuadratureRule monte_carlo_rule(const ModelDomain& d, std::size_t points_per_replica,
                                std::size_t replicas, std::uint64_t seed);

namespace detail {

[[noreturn]] inline void non_finite(std::size_t i, const Point& z) {
  std::ostringstream os;
  os << "integrand is not finite at node " << i << " (z = (";
  for (std::size_t k = 0; k < z.dim(); ++k) os << (k ? ", " : "") << z[k].real() << (z[k].imag() < 0 ? "" : "+") << z[k].imag() << "i";
  os << "))";
  throw EvaluationError(os.str());
}

inline void check_alpha(double alpha) {
  if (!(alpha > -1.0)) throw ParameterError("integrate: weight exponent must exceed -1");
}

template <class T>
double magnitude(const T& v) {
  return std::abs(v);
}

template <class T>
void combine(const QuadratureRule& rule, const std::vector<T>& values, T& value, double& error) {
  const std::size_t n = values.size();
  if (rule.kind == RuleKind::tensor_polar) {
    T sum{}, emb{};
    for (std::size_t i = 0; i < n; ++i) sum += rule.weights[i] * values[i];
    if (rule.embedded_weights.empty()) {
      error = NAN;
    } else {
      for (std::size_t i = 0; i < n; ++i) emb += rule.embedded_weights[i] * values[i];
      error = magnitude(sum - emb);
    }
    value = sum;
    return;
  }
  const std::size_t reps = rule.replicas;
  const std::size_t per = n / reps;
  std::vector<T> est(reps, T{});
  for (std::size_t r = 0; r < reps; ++r)
    for (std::size_t i = r * per; i < (r + 1) * per; ++i) est[r] += rule.weights[i] * values[i];
  T mean{};
  for (const T& e : est) mean += e;
  mean /= static_cast<double>(reps);
  double var = 0.0;
  for (const T& e : est) var += std::norm(e - mean);
  value = mean;
  error = reps > 1 ? std::sqrt(var / (reps - 1) / reps) : NAN;
}

}  // namespace detail

/// Integral of f against delta^alpha dnu with the rule's error estimate.
/// Throws EvaluationError naming the node if f is not finite there.
template <class F>
Estimate integrate(const QuadratureRule& rule, F&& f, double alpha = 0.0) {
  detail::check_alpha(alpha);
  std::vector<double> values(rule.size());
  parallel_for(rule.size(), [&](std::size_t i) {
    double v = static_cast<double>(f(rule.nodes[i]));
    if (!std::isfinite(v)) detail::non_finite(i, rule.nodes[i]);
    if (alpha != 0.0) v *= std::pow(rule.deltas[i], alpha);
    values[i] = v;
  });
  Estimate e;
  detail::combine(rule, values, e.value, e.error);
  return e;
}

/// Complex-valued counterpart of integrate.
template <class F>
ComplexEstimate integrate_complex(const QuadratureRule& rule, F&& f, double alpha = 0.0) {
  detail::check_alpha(alpha);
  std::vector<cplx> values(rule.size());
  parallel_for(rule.size(), [&](std::size_t i) {
    cplx v = f(rule.nodes[i]);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) detail::non_finite(i, rule.nodes[i]);
    if (alpha != 0.0) v *= std::pow(rule.deltas[i], alpha);
    values[i] = v;
  });
  ComplexEstimate e;
  detail::combine(rule, values, e.value, e.error);
  return e;
}

/// Independent plain Monte Carlo estimate of the integral of f against
/// delta^alpha dnu with its standard error. Samples are drawn in fixed blocks
/// with per-block seeds, so the result does not depend on the thread count.
template <class F>
Estimate monte_carlo_oracle(const ModelDomain& d, F&& f, double alpha, std::size_t samples,
                            std::uint64_t seed) {
  detail::check_alpha(alpha);
  if (samples < 1000) throw ParameterError("monte_carlo_oracle: needs at least 1000 samples");
  constexpr std::size_t kBlock = 1 << 16;
  const std::size_t blocks = (samples + kBlock - 1) / kBlock;
  std::vector<double> sums(blocks, 0.0), squares(blocks, 0.0);
  const int n = d.n;
  parallel_for(blocks, [&](std::size_t b) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(b), 0x6d63u};
    std::mt19937_64 rng(seq);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::normal_distribution<double> normal(0.0, 1.0);
    const std::size_t hi = std::min(samples, (b + 1) * kBlock);
    double s = 0.0, s2 = 0.0;
    for (std::size_t i = b * kBlock; i < hi; ++i) {
      std::vector<cplx> c(n);
      double nrm = 0.0;
      for (int k = 0; k < n; ++k) {
        const double re = normal(rng), im = normal(rng);
        c[k] = cplx(re, im);
        nrm += re * re + im * im;
      }
      // |z|^(2n) is uniform on [0, 1) for the volume measure.
      const double t = std::pow(unif(rng), 1.0 / n);  // |z|^2
      const double scale = std::sqrt(t / nrm);
      for (cplx& v : c) v *= scale;
      const Point z(std::move(c));
      double v = static_cast<double>(f(z));
      if (alpha != 0.0) {
        const double ds = 1.0 - t;
        v *= std::pow(delta_from_smooth(ds, d.weight), alpha);
      }
      if (!std::isfinite(v)) detail::non_finite(i, z);
      s += v;
      s2 += v * v;
    }
    sums[b] = s;
    squares[b] = s2;
  });
  double s = 0.0, s2 = 0.0;
  for (std::size_t b = 0; b < blocks; ++b) {
    s += sums[b];
    s2 += squares[b];
  }
  const double m = s / samples;
  const double var = std::max(0.0, s2 / samples - m * m) * samples / (samples - 1.0);
  const double vol = d.volume();
  return {vol * m, vol * std::sqrt(var / samples)};
}

}  // namespace toeplab
