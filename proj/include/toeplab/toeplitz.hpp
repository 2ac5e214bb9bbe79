#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "toeplab/fit.hpp"
#include "toeplab/geometry.hpp"
#include "toeplab/kernels.hpp"
#include "toeplab/measures.hpp"

namespace toeplab {

/// Exponents of T_mu^beta : A^p1_alpha1 -> A^p2_alpha2 and the derived
/// skew Carleson parameters lambda = 1 + 1/p1 - 1/p2 and
/// gamma = (beta + alpha1/p1 - alpha2/p2) / lambda.
struct OperatorParams {
  int n = 1;
  double p1 = 2.0, alpha1 = 0.0;
  double p2 = 2.0, alpha2 = 0.0;
  double beta = 0.0;
  double lambda = 1.0;
  double gamma = 0.0;  // NaN when lambda = 0
  bool lambda_zero = false;
  /// n + 1 + beta > n max(1, 1/p_j) + (1 + alpha_j)/p_j for j = 1, 2.
  bool hypothesis1 = true;
  bool hypothesis2 = true;

  bool hypothesis() const { return hypothesis1 && hypothesis2; }
  double theta() const { return 1.0 + gamma / (n + 1); }
  CarlesonParams carleson(double r) const { return CarlesonParams(lambda, gamma, r); }
};

OperatorParams derive_params(int n, double p1, double alpha1, double p2, double alpha2, double beta);

/// c K_beta(., center).
struct KernelTerm {
  cplx coefficient = 1.0;
  Point center;
};

/// c z^powers.
struct MonomialTerm {
  cplx coefficient = 1.0;
  std::vector<int> powers;
  int degree() const;
};

/// Finite combination of Bergman kernels and monomials, the class of functions
/// on which Toeplitz operators with radial symbols are evaluated in closed form.
class TestFunction {
 public:
  TestFunction(int n, double beta);

  static TestFunction kernel(int n, double beta, const Point& center, cplx coefficient = 1.0);
  static TestFunction monomial(int n, double beta, std::vector<int> powers, cplx coefficient = 1.0);

  TestFunction& add(KernelTerm term);
  TestFunction& add(MonomialTerm term);
  TestFunction scaled(cplx factor) const;

  cplx operator()(const Point& z) const;
  int dim() const { return kp_.n; }
  const KernelParams& kernel_params() const { return kp_; }
  const std::vector<KernelTerm>& kernels() const { return kernels_; }
  const std::vector<MonomialTerm>& monomials() const { return monomials_; }

 private:
  KernelParams kp_;
  std::vector<KernelTerm> kernels_;
  std::vector<MonomialTerm> monomials_;
};

/// The function T_mu^beta f for a test function f. Atomic measures give an
/// exact finite sum. Radial densities act diagonally on homogeneous
/// polynomials; kernel terms are summed through that expansion, in closed form
/// with a hypergeometric function for untruncated smooth densities.
class ToeplitzImage {
 public:
  ToeplitzImage(const Measure& mu, const TestFunction& f);
  cplx operator()(const Point& z) const;

 private:
  struct Radial;
  Measure mu_;
  TestFunction f_;
  std::vector<cplx> atom_coefficients_;
  std::shared_ptr<const Radial> radial_;
};

/// T_mu^beta f(z) for a test function whose kernel weight is beta.
cplx apply_toeplitz(const Measure& mu, const TestFunction& f, const Point& z);

/// T_mu^beta f(z) for a general f by quadrature against a radial density (exact
/// sum for discrete measures). growth bounds |f(w)| <= C delta(w)^(-growth); the
/// integral diverges and DivergenceError is thrown when t - growth <= -1.
ComplexEstimate apply_toeplitz(const Measure& mu, double beta, const Function& f, const Point& z,
                               const QuadratureRule& rule, double growth = 0.0);

/// Options shared by the norm probes.
struct ProbeOptions {
  /// Centers a_k = (1 - 2^-k) direction for k = 1..levels.
  int levels = 10;
  Point direction;  // empty selects e_1
  double r = 0.5;
  double fit_delta_max = 0.1;
  double slope_tolerance = 0.1;
  /// Radial refinement of the norm rules below the depth of the deepest center.
  int extra_levels = 22;
  std::uint64_t seed = 1;
};

/// Boundary sequence (1 - 2^-k) direction, k = 1..levels.
std::vector<Point> boundary_centers(int n, const ProbeOptions& options);

/// Rule used for A^p_alpha norms of functions concentrated near the centers.
QuadratureRule probe_rule(const ModelDomain& d, const std::vector<Point>& centers, int extra_levels);

struct LowerProbe {
  Point center;
  double delta = 0.0;
  double ball_mass = 0.0;
  double value = 0.0;            // mu(B(a, r)) / delta(a)^((n+1+gamma) lambda)
  double kernel_action = 0.0;    // T f_a(a) = integral of |K_beta(a, w)|^2 dmu(w), f_a = K_beta(., a)
  double kernel_norm = 0.0;      // ||K_beta(., a)||_{p1, alpha1}
};

/// The lower-bound chain at a. Throws BranchError when lambda < 1.
LowerProbe lower_bound_probe(const Measure& mu, const OperatorParams& op, const Point& a, double r);

enum class ProbeFamily { kernel_probe, atom_probe, vanishing_probe, polynomial };
const char* to_string(ProbeFamily family);
ProbeFamily probe_family_from_string(const std::string& name);

struct ProbeRecord {
  std::string label;
  double delta = NAN;  // depth of the probe's center, NaN for polynomials
  double input_norm = 0.0;
  double output_norm = 0.0;
  double ratio = 0.0;
  double error = 0.0;  // quadrature error of the output norm
};

struct NormEstimate {
  double value = 0.0;  // max ratio, a lower estimate of the operator norm
  std::vector<ProbeRecord> probes;
  std::size_t skipped = 0;
  std::vector<std::string> diagnostics;
};

/// Max of ||T f||_{p2, alpha2} / ||f||_{p1, alpha1} over a structured family.
/// Kernel and vanishing probes use one center per level; atom probes combine
/// normalized kernels with random coefficients (trials draws); polynomial probes
/// are z_1^k for k < trials.
NormEstimate estimate_operator_norm(const Measure& mu, const OperatorParams& op, ProbeFamily family,
                                    std::size_t trials, const ProbeOptions& options = {});

struct CompactnessResult {
  Verdict verdict = Verdict::inconclusive;
  PowerFit fit;
  std::vector<double> deltas;
  std::vector<double> norms;  // ||T f_k||_{p2, alpha2}
  std::string diagnostic;
};

/// Decay of ||T f_k|| for f_k = delta(a_k)^((n+1+beta) - (n+1+alpha1)/p1) K_beta(., a_k).
/// lambda < 1 is reported as vanishing without computation.
CompactnessResult compactness_probe(const Measure& mu, const OperatorParams& op, const ProbeOptions& options = {});

struct SandwichSide {
  double value = 0.0;  // sup over the centers
  PowerFit fit;
  bool bounded = true;
};

/// Lower probe sup, operator norm estimate and skew Carleson norm for one pair.
struct Sandwich {
  SandwichSide lower;
  SandwichSide estimate;
  SandwichSide skew;
  Verdict skew_verdict = Verdict::inconclusive;
  std::vector<LowerProbe> lower_probes;
  NormEstimate norm;
  bool agree = false;
  /// Largest pairwise ratio among the three values (1 when all coincide).
  double spread = 1.0;
};

Sandwich run_sandwich(const Measure& mu, const OperatorParams& op, const ProbeOptions& options = {},
                      const SweepOptions& sweep = {});

}  // namespace toeplab
