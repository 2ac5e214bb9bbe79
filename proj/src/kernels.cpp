#include "toeplab/kernels.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "toeplab/errors.hpp"
#include "toeplab/special.hpp"

namespace toeplab {

namespace {

constexpr double kPi = std::numbers::pi;

void check_beta(double beta) {
  if (!(beta > -1.0)) throw ParameterError("kernel weight exponent beta must exceed -1");
}

// c * u^(-s) on the principal branch; Re u > 0 for u = 1 - <z, w>.
cplx kernel_power(double c, cplx u, double s) {
  const double logmod = 0.5 * std::log(std::norm(u));
  const double arg = std::arg(u);
  return std::polar(c * std::exp(-s * logmod), -s * arg);
}

}  // namespace

double kernel_constant_closed_form(int n, double beta) {
  check_beta(beta);
  return std::exp(std::lgamma(n + beta + 1.0) - std::lgamma(beta + 1.0)) / std::pow(kPi, n);
}

double kernel_constant_numeric(int n, double beta) {
  check_beta(beta);
  if (n < 1) throw ParameterError("kernel dimension must be positive");
  // Reproducing 1 at the origin: c * integral of (1 - |w|^2)^beta dnu = 1, where the
  // integral is pi^n/(n-1)! * int_0^1 t^(n-1) (1-t)^beta dt. With v = (1-t)^(beta+1)
  // the radial factor becomes (1/(beta+1)) int_0^1 (1 - v^(1/(beta+1)))^(n-1) dv.
  const double g = 1.0 / (beta + 1.0);
  const KronrodRule& gk = gauss_kronrod15();
  double radial = 0.0;
  for (int l = 0; l < 64; ++l) {
    const double hi = std::ldexp(1.0, -l), lo = std::ldexp(1.0, -l - 1);
    const double half = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
    for (int i = 0; i < 15; ++i) {
      const double v = mid + half * gk.nodes[i];
      radial += half * gk.kronrod_weights[i] * std::pow(1.0 - std::pow(v, g), n - 1);
    }
  }
  radial *= g;
  const double mass = std::pow(kPi, n) / std::tgamma(n) * radial;
  return 1.0 / mass;
}

KernelParams::KernelParams(int dim, double weight_exponent) : n(dim), beta(weight_exponent) {
  check_beta(beta);
  if (n < 1) throw ParameterError("kernel dimension must be positive");
  constant = kernel_constant_numeric(n, beta);
  const double exact = kernel_constant_closed_form(n, beta);
  if (!(std::abs(constant - exact) <= 1e-12 * exact))
    throw EvaluationError("kernel constant failed certification against the Gamma-function value");
}

SpaceParams::SpaceParams(double exponent, double weight_exponent) : p(exponent), alpha(weight_exponent) {
  if (!(p > 0.0)) throw ParameterError("space exponent p must be positive");
  if (!(alpha > -1.0)) throw ParameterError("space weight exponent alpha must exceed -1");
}

cplx bergman_kernel(const KernelParams& kp, const Point& z, const Point& w) {
  if (z.dim() != w.dim() || static_cast<int>(z.dim()) != kp.n)
    throw ParameterError("bergman_kernel: dimension mismatch");
  if (!(z.norm_sq() < 1.0) || !(w.norm_sq() < 1.0)) throw DomainError("bergman_kernel: point outside the ball");
  return kernel_power(kp.constant, 1.0 - inner(z, w), kp.order());
}

double kernel_diagonal(const KernelParams& kp, const Point& a) {
  const double ds = 1.0 - a.norm_sq();
  if (!(ds > 0.0)) throw DomainError("kernel_diagonal: point outside the ball");
  return kp.constant * std::pow(ds, -kp.order());
}

cplx normalized_kernel(const KernelParams& kp, const Point& a, const Point& z) {
  return bergman_kernel(kp, z, a) / std::sqrt(kernel_diagonal(kp, a));
}

Estimate kernel_integral_estimate(const KernelParams& kp, const Point& z0, double p, double alpha,
                                  const QuadratureRule& rule) {
  if (!(alpha > -1.0)) throw ParameterError("kernel_integral_estimate: alpha must exceed -1");
  const double bound = (kp.n + kp.beta + 1.0) * (p - 1.0);
  if (!(alpha - kp.beta < bound))
    throw ParameterError("kernel_integral_estimate: requires alpha - beta < (n + beta + 1)(p - 1)");
  return integrate(rule, [&](const Point& w) { return std::pow(std::abs(bergman_kernel(kp, w, z0)), p); },
                   alpha);
}

double kernel_power_integral(int n, double sigma, double alpha, double a_norm_sq) {
  if (!(alpha > -1.0)) throw ParameterError("kernel_power_integral: alpha must exceed -1");
  const double c = n + 1.0 + alpha;
  const double pre = std::pow(kPi, n) * std::exp(std::lgamma(alpha + 1.0) - std::lgamma(c));
  return pre * hyp2f1(sigma, sigma, c, cplx(a_norm_sq)).real();
}

ComplexEstimate bergman_project(const KernelParams& kp, const Function& f, const Point& z,
                                const QuadratureRule& rule) {
  // The projection always uses the smooth weight, for which the kernel is exact.
  std::vector<cplx> values(rule.size());
  parallel_for(rule.size(), [&](std::size_t i) {
    const cplx v = bergman_kernel(kp, z, rule.nodes[i]) * f(rule.nodes[i]);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) detail::non_finite(i, rule.nodes[i]);
    values[i] = kp.beta == 0.0 ? v : v * std::pow(rule.smooth_deltas[i], kp.beta);
  });
  ComplexEstimate e;
  detail::combine(rule, values, e.value, e.error);
  return e;
}

double DualSpaces::conjugate_exponent() const {
  if (!(primal.p > 1.0)) throw ParameterError("duality_pairing: requires p > 1 for a conjugate exponent");
  return primal.p / (primal.p - 1.0);
}

double DualSpaces::beta() const {
  if (!(alpha_dual > -1.0)) throw ParameterError("duality_pairing: dual weight exponent must exceed -1");
  return primal.alpha / primal.p + alpha_dual / conjugate_exponent();
}

ComplexEstimate duality_pairing(const Function& f, const Function& g, double beta,
                                const QuadratureRule& rule) {
  check_beta(beta);
  std::vector<cplx> values(rule.size());
  parallel_for(rule.size(), [&](std::size_t i) {
    const cplx v = f(rule.nodes[i]) * std::conj(g(rule.nodes[i]));
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) detail::non_finite(i, rule.nodes[i]);
    values[i] = beta == 0.0 ? v : v * std::pow(rule.smooth_deltas[i], beta);
  });
  ComplexEstimate e;
  detail::combine(rule, values, e.value, e.error);
  return e;
}

ComplexEstimate duality_pairing(const Function& f, const Function& g, const DualSpaces& spaces,
                                const QuadratureRule& rule) {
  return duality_pairing(f, g, spaces.beta(), rule);
}

Estimate norm(const Function& f, const SpaceParams& sp, const QuadratureRule& rule) {
  const Estimate e = integrate(rule, [&](const Point& w) { return std::pow(std::abs(f(w)), sp.p); }, sp.alpha);
  const double value = std::pow(e.value, 1.0 / sp.p);
  const double err = e.value > 0.0 ? value / sp.p * e.error / e.value : e.error;
  return {value, err};
}

}  // namespace toeplab
