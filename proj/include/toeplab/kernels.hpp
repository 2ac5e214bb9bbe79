#pragma once

#include <functional>

#include "toeplab/geometry.hpp"
#include "toeplab/quadrature.hpp"

namespace toeplab {

using Function = std::function<cplx(const Point&)>;

/// Weighted Bergman kernel parameters. The normalizing constant is obtained at
/// construction by requiring that the kernel reproduce the constant 1 against
/// (1 - |w|^2)^beta dnu, and is checked against Gamma(n+beta+1)/(pi^n Gamma(beta+1)).
struct KernelParams {
  int n = 1;
  double beta = 0.0;
  double constant = 0.0;

  KernelParams(int dim, double weight_exponent);
  /// n + 1 + beta, the exponent of 1 - <z, w>.
  double order() const { return n + 1 + beta; }
};

double kernel_constant_closed_form(int n, double beta);
double kernel_constant_numeric(int n, double beta);

struct SpaceParams {
  double p = 2.0;
  double alpha = 0.0;

  SpaceParams(double exponent, double weight_exponent);
  double theta(int n) const { return 1.0 + alpha / (n + 1); }
};

/// K_beta(z, w) = c (1 - <z, w>)^-(n+1+beta), holomorphic in z.
cplx bergman_kernel(const KernelParams& kp, const Point& z, const Point& w);

/// K_beta(a, a) = c (1 - |a|^2)^-(n+1+beta).
double kernel_diagonal(const KernelParams& kp, const Point& a);

/// k_{beta,a}(z) = K_beta(z, a) / sqrt(K_beta(a, a)).
cplx normalized_kernel(const KernelParams& kp, const Point& a, const Point& z);

/// Integral of |K_beta(., z0)|^p delta^alpha dnu. Requires
/// alpha - beta < (n + beta + 1)(p - 1).
Estimate kernel_integral_estimate(const KernelParams& kp, const Point& z0, double p, double alpha,
                                  const QuadratureRule& rule);

/// Exact value of the integral of |1 - <w, a>|^(-2 sigma) (1 - |w|^2)^alpha dnu(w)
/// over the ball, with a_norm_sq = |a|^2.
double kernel_power_integral(int n, double sigma, double alpha, double a_norm_sq);

/// P_beta f(z): integral of K_beta(z, w) f(w) (1 - |w|^2)^beta dnu(w).
ComplexEstimate bergman_project(const KernelParams& kp, const Function& f, const Point& z,
                                const QuadratureRule& rule);

/// A^p_alpha paired with A^p'_alpha' through the weight beta = alpha/p + alpha'/p'.
struct DualSpaces {
  SpaceParams primal;
  double alpha_dual = 0.0;

  /// p' = p / (p - 1); throws ParameterError when p <= 1.
  double conjugate_exponent() const;
  double beta() const;
};

/// (f, g)_beta = integral of f conj(g) (1 - |w|^2)^beta dnu.
ComplexEstimate duality_pairing(const Function& f, const Function& g, double beta,
                                const QuadratureRule& rule);
ComplexEstimate duality_pairing(const Function& f, const Function& g, const DualSpaces& spaces,
                                const QuadratureRule& rule);

/// ||f||_{p,alpha} using the rule's boundary-distance convention.
Estimate norm(const Function& f, const SpaceParams& sp, const QuadratureRule& rule);

}  // namespace toeplab
