#include "toeplab/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <memory>
#include <numbers>

#include "toeplab/fit.hpp"
#include "toeplab/geometry.hpp"
#include "toeplab/kernels.hpp"
#include "toeplab/measures.hpp"
#include "toeplab/quadrature.hpp"
#include "toeplab/toeplitz.hpp"

namespace toeplab {

namespace {

constexpr double kPi = std::numbers::pi;

// Pinned acceptance tolerances.
constexpr double kReproduceTol = 1e-6;
constexpr double kReproduceSeconds = 10.0;
constexpr double kNormalizationTol = 1e-6;
constexpr double kBerezinTol = 1e-6;
constexpr double kVolumeTol = 1e-6;
constexpr double kMcSigmas = 3.0;
constexpr double kExponentTol = 0.05;
constexpr double kSlopeTol = 0.1;
constexpr double kClassifierSeconds = 60.0;
constexpr double kSandwichCap = 100.0;
constexpr double kIdentityTol = 1e-4;
constexpr double kSandwichSeconds = 300.0;
constexpr double kNormComparability = 10.0;

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string fmt(const char* f, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

std::vector<double> log_spaced(double lo, double hi, int count) {
  std::vector<double> out;
  for (int i = 0; i < count; ++i) out.push_back(hi * std::pow(lo / hi, static_cast<double>(i) / (count - 1)));
  return out;
}

Point disk_point(double radius, double angle) { return Point(std::polar(radius, angle)); }

QuadratureRule focused_rule(const ModelDomain& d, const Point& z, int extra, bool embedded) {
  PolarRuleOptions o;
  o.focus = {z};
  o.radial_levels = static_cast<int>(std::ceil(std::log2(1.0 / (1.0 - z.norm())))) + extra;
  o.embedded = embedded;
  return polar_rule(d, o);
}

// 1. P_beta reproduces z^k, k <= 5.
CriterionResult reproducing() {
  CriterionResult res{1, "reproducing property", false, "", {}, 0.0};
  Stopwatch sw;
  const ModelDomain d(1);
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const Point z = disk_point(0.2 + 0.75 * i / 19.0, 2.0 * kPi * 0.6180339887 * i);
    const QuadratureRule rule = focused_rule(d, z, 28, false);
    for (double beta : {0.0, 0.5, 1.0, 2.0}) {
      const KernelParams kp(1, beta);
      for (int k = 0; k <= 5; ++k) {
        const Function f = [k](const Point& w) { return std::pow(w[0], k); };
        const cplx exact = f(z);
        const cplx got = bergman_project(kp, f, z, rule).value;
        worst = std::max(worst, std::abs(got - exact) / std::abs(exact));
      }
    }
  }
  res.seconds = sw.seconds();
  res.pass = worst < kReproduceTol && res.seconds < kReproduceSeconds;
  res.detail = fmt("max relative error %.2e over 480 cases", worst);
  res.metrics = {{"max_relative_error", worst}};
  return res;
}

// 2. ||k_{beta,a}||_{2,beta} = 1.
CriterionResult normalization() {
  CriterionResult res{2, "kernel normalization", false, "", {}, 0.0};
  Stopwatch sw;
  const ModelDomain d(1);
  double worst = 0.0;
  for (double a : {0.0, 0.5, 0.9, 0.99}) {
    const Point pa(a);
    const QuadratureRule rule = focused_rule(d, pa, 34, true);
    for (double beta : {0.0, 1.0}) {
      const KernelParams kp(1, beta);
      const Estimate e = norm([&](const Point& z) { return normalized_kernel(kp, pa, z); }, SpaceParams(2.0, beta), rule);
      worst = std::max(worst, std::abs(e.value - 1.0));
      res.metrics.emplace_back(fmt("norm_a%.2f_beta%.0f", a, beta), e.value);
    }
  }
  res.seconds = sw.seconds();
  res.pass = worst < kNormalizationTol;
  res.detail = fmt("max |norm - 1| = %.2e", worst);
  res.metrics.emplace_back("max_deviation", worst);
  return res;
}

// 3. B^2 nu = 1.
CriterionResult berezin_identity() {
  CriterionResult res{3, "Berezin identity", false, "", {}, 0.0};
  Stopwatch sw;
  const ModelDomain d(1);
  const Measure nu = Measure::radial_density(d, 0.0);
  const std::vector<Point> grid = radial_grid(d, 20, 1e-3, 0.5);
  double worst = 0.0, deepest = 1.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Point z = disk_point(grid[i].norm(), 2.0 * kPi * 0.6180339887 * i);
    deepest = std::min(deepest, boundary_distance(d, z));
    const BerezinValue b = berezin_transform(nu, z, 2.0, focused_rule(d, z, 30, true));
    worst = std::max(worst, std::abs(b.value - 1.0));
  }
  res.seconds = sw.seconds();
  res.pass = worst < kBerezinTol && deepest <= 1e-3 * (1 + 1e-9);
  res.detail = fmt("max |B^2 nu - 1| = %.2e, deepest delta %.1e", worst, deepest);
  res.metrics = {{"max_deviation", worst}, {"deepest_delta", deepest}};
  return res;
}

// 4. Ball volumes: closed form, pull-back quadrature, Monte Carlo, boundary exponent.
CriterionResult geometry(std::uint64_t seed) {
  CriterionResult res{4, "geometry exactness", false, "", {}, 0.0};
  Stopwatch sw;
  const ModelDomain d(1);
  double worst_rel = 0.0;
  for (double a : {0.0, 0.5, 0.9, 0.99})
    for (double r : {0.3, 0.5, 0.7}) {
      const KobayashiBall b(Point(a), r);
      const double closed = ball_volume_closed_form(d, b);
      const double numeric = ball_volume_numeric(d, b, 0.0);
      worst_rel = std::max(worst_rel, std::abs(numeric / closed - 1.0));
    }
  double worst_sigma = 0.0;
  for (double a : {0.0, 0.5, 0.9}) {
    const KobayashiBall b(Point(a), 0.5);
    const Estimate mc =
        monte_carlo_oracle(d, [&](const Point& z) { return b.contains(z) ? 1.0 : 0.0; }, 0.0, 1'000'000, seed);
    const double sigmas = std::abs(mc.value - ball_volume_closed_form(d, b)) / mc.error;
    worst_sigma = std::max(worst_sigma, sigmas);
    res.metrics.emplace_back(fmt("mc_sigmas_a%.1f", a), sigmas);
  }
  double worst_exp = 0.0;
  for (double beta : {0.0, 1.0}) {
    std::vector<double> xs, ys;
    for (double delta : log_spaced(1e-3, 1e-1, 9)) {
      const Point a(radius_for_delta(d, delta));
      xs.push_back(delta);
      ys.push_back(ball_volume(d, KobayashiBall(a, 0.5), beta));
    }
    const PowerFit fit = fit_power_law(xs, ys);
    worst_exp = std::max(worst_exp, std::abs(fit.exponent - (2.0 + beta)));
    res.metrics.emplace_back(fmt("exponent_beta%.0f", beta), fit.exponent);
  }
  res.seconds = sw.seconds();
  res.pass = worst_rel < kVolumeTol && worst_sigma <= kMcSigmas && worst_exp <= kExponentTol;
  res.detail = fmt("closed vs numeric %.1e, MC %.2f s.e.", worst_rel, worst_sigma) +
               fmt(", exponent error %.3f", worst_exp);
  res.metrics.emplace_back("max_relative_volume_error", worst_rel);
  res.metrics.emplace_back("max_mc_sigmas", worst_sigma);
  res.metrics.emplace_back("max_exponent_error", worst_exp);
  return res;
}

// 5. Kernel integral exponents and the two-sided kernel bound on balls.
CriterionResult kernel_estimates(std::uint64_t seed) {
  CriterionResult res{5, "kernel estimates", false, "", {}, 0.0};
  Stopwatch sw;
  const ModelDomain d(1);
  struct Case {
    double p, alpha, beta;
  };
  double worst = 0.0;
  for (const Case& c : {Case{2, 0, 0}, Case{2, 1, 0}, Case{3, 0, 1}}) {
    const KernelParams kp(1, c.beta);
    std::vector<double> xs, ys;
    for (double delta : log_spaced(1e-3, 1e-1, 9)) {
      const Point z0(radius_for_delta(d, delta));
      xs.push_back(delta);
      ys.push_back(kernel_integral_estimate(kp, z0, c.p, c.alpha, focused_rule(d, z0, 26, false)).value);
    }
    const double expected = c.alpha - c.beta - (1 + c.beta + 1) * (c.p - 1);
    const PowerFit fit = fit_power_law(xs, ys);
    worst = std::max(worst, std::abs(fit.exponent - expected));
    res.metrics.emplace_back(fmt("slope_p%.0f_alpha%.0f", c.p, c.alpha) + fmt("_beta%.0f", c.beta), fit.exponent);
  }
  // |K_beta(z, a)| delta(a)^(n+1+beta) / c stays in [(1-r)^s, (1+r)^s] on B(a, r).
  const double r = 0.5;
  bool confined = true;
  double lo_all = INFINITY, hi_all = 0.0;
  for (double beta : {0.0, 1.0}) {
    const KernelParams kp(1, beta);
    const double s = kp.order();
    for (int k = 1; k <= 10; ++k) {
      const Point a(1.0 - std::ldexp(1.0, -k));
      const double da = boundary_distance(d, a);
      for (const Point& z : sample_ball(d, KobayashiBall(a, r), 200, seed + k)) {
        const double v = std::abs(bergman_kernel(kp, z, a)) * std::pow(da, s) / kp.constant;
        const double scaled = std::pow(v, 1.0 / s);
        lo_all = std::min(lo_all, scaled);
        hi_all = std::max(hi_all, scaled);
        if (v < std::pow(1.0 - r, s) || v > std::pow(1.0 + r, s)) confined = false;
      }
    }
  }
  res.seconds = sw.seconds();
  res.pass = worst <= kExponentTol && confined;
  res.detail = fmt("max slope error %.3f; ball ratio^(1/s) in [%.3f, ", worst, lo_all) + fmt("%.3f]", hi_all);
  res.metrics.emplace_back("max_slope_error", worst);
  res.metrics.emplace_back("ball_ratio_min", lo_all);
  res.metrics.emplace_back("ball_ratio_max", hi_all);
  return res;
}

// 6. Classifier ground truth for delta^t nu at (1, 0), r in {0.3, 0.5, 0.7}.
CriterionResult classifier() {
  CriterionResult res{6, "Carleson classifier ground truth", false, "", {}, 0.0};
  Stopwatch sw;
  const ModelDomain d(1);
  bool ok = true;
  for (double t : {-0.5, 0.0, 0.5}) {
    const Verdict expected = t < 0 ? Verdict::not_carleson : (t == 0 ? Verdict::carleson : Verdict::vanishing);
    for (double r : {0.3, 0.5, 0.7}) {
      const Classification c = classify_skew_carleson(Measure::radial_density(d, t), CarlesonParams(1.0, 0.0, r));
      if (c.verdict != expected || std::abs(c.fit.exponent - t) > kSlopeTol) ok = false;
      res.metrics.emplace_back(fmt("slope_t%.1f_r%.1f", t, r), c.fit.exponent);
      res.metrics.emplace_back(fmt("verdict_t%.1f_r%.1f", t, r), std::string(to_string(c.verdict)));
    }
  }
  res.seconds = sw.seconds();
  res.pass = ok && res.seconds < kClassifierSeconds;
  res.detail = ok ? "verdicts not_carleson, carleson, vanishing for every r" : "verdict or slope mismatch";
  return res;
}

struct BatteryMeasure {
  std::string name;
  Measure mu;
  double lambda;
  Verdict expected;
};

Measure boundary_atoms(const ModelDomain& d, int count, double decay) {
  std::vector<Point> pts;
  std::vector<double> w;
  for (int k = 1; k <= count; ++k) {
    pts.push_back(Point(1.0 - std::ldexp(1.0, -k)));
    w.push_back(std::pow(boundary_distance(d, pts.back()), decay));
  }
  return Measure::atomic(d, pts, w);
}

// 7. Sup, lattice and Berezin diagnostics agree.
CriterionResult cross_consistency() {
  CriterionResult res{7, "diagnostic cross-consistency", false, "", {}, 0.0};
  Stopwatch sw;
  const ModelDomain d(1);
  const Lattice lattice = build_lattice(d, 0.5, 1e-3);
  const auto V = Verdict::vanishing, C = Verdict::carleson, N = Verdict::not_carleson;
  const std::vector<BatteryMeasure> battery{
      {"t=0,lambda=1", Measure::radial_density(d, 0.0), 1.0, C},
      {"t=0.5,lambda=1", Measure::radial_density(d, 0.5), 1.0, V},
      {"t=-0.5,lambda=1", Measure::radial_density(d, -0.5), 1.0, N},
      {"t=1,lambda=1.5", Measure::radial_density(d, 1.0), 1.5, C},
      {"t=1.5,lambda=1.5", Measure::radial_density(d, 1.5), 1.5, V},
      {"t=0.5,lambda=1.5", Measure::radial_density(d, 0.5), 1.5, N},
      {"t=0,lambda=0.75", Measure::radial_density(d, 0.0), 0.75, V},
      {"t=-0.5,lambda=0.75", Measure::radial_density(d, -0.5), 0.75, N},
      {"atoms decay 2,lambda=1", boundary_atoms(d, 40, 2.0), 1.0, C},
      {"atoms decay 1,lambda=1", boundary_atoms(d, 40, 1.0), 1.0, N},
  };
  bool ok = true;
  int agree = 0;
  for (const BatteryMeasure& b : battery) {
    const CarlesonParams cp(b.lambda, 0.0, 0.5);
    const Classification sup = classify_skew_carleson(b.mu, cp);
    const Classification lat = lattice_diagnostic(b.mu, cp, lattice);
    const Classification ber = berezin_diagnostic(b.mu, cp);
    const bool same = sup.verdict == lat.verdict && lat.verdict == ber.verdict;
    const bool truth = sup.verdict == b.expected;
    bool comparable = true;
    if (b.lambda < 1.0 && sup.verdict == Verdict::vanishing) {
      const double ratio = lat.norm / sup.norm;
      comparable = ratio >= 1.0 / kNormComparability && ratio <= kNormComparability;
      res.metrics.emplace_back(b.name + ": lattice/continuous norm", ratio);
    }
    if (same) ++agree;
    if (!same || !truth || !comparable) ok = false;
    res.metrics.emplace_back(b.name, std::string(to_string(sup.verdict)) + "/" + to_string(lat.verdict) + "/" +
                                         to_string(ber.verdict));
  }
  res.seconds = sw.seconds();
  res.pass = ok;
  res.detail = fmt("%.0f of %.0f measures agree across sup, lattice and Berezin diagnostics", agree,
                   static_cast<double>(battery.size()));
  return res;
}

// 8. Lower probe, norm estimate and skew Carleson norm: verdict agreement and bounded ratios.
CriterionResult sandwich() {
  CriterionResult res{8, "operator norm sandwich", false, "", {}, 0.0};
  Stopwatch sw;
  const ModelDomain d(1);
  struct Pair {
    std::string name;
    Measure mu;
    OperatorParams op;
  };
  const OperatorParams o20200 = derive_params(1, 2, 0, 2, 0, 0);
  const OperatorParams o21211 = derive_params(1, 2, 1, 2, 1, 1);
  const OperatorParams o10201 = derive_params(1, 1, 0, 2, 0, 1);
  const OperatorParams o21321 = derive_params(1, 2, 1, 3, 2, 1);
  const std::vector<Pair> battery{
      {"nu (2,0,2,0,0)", Measure::radial_density(d, 0.0), o20200},
      {"delta^0.5 nu (2,0,2,0,0)", Measure::radial_density(d, 0.5), o20200},
      {"delta^-0.5 nu (2,0,2,0,0)", Measure::radial_density(d, -0.5), o20200},
      {"atoms decay 2 (2,0,2,0,0)", boundary_atoms(d, 40, 2.0), o20200},
      {"delta nu (2,1,2,1,1)", Measure::radial_density(d, 1.0), o21211},
      {"nu (2,1,2,1,1)", Measure::radial_density(d, 0.0), o21211},
      {"delta^2 nu (2,1,2,1,1)", Measure::radial_density(d, 2.0), o21211},
      {"delta^2 nu (1,0,2,0,1)", Measure::radial_density(d, 2.0), o10201},
      {"delta nu (1,0,2,0,1)", Measure::radial_density(d, 1.0), o10201},
      {"delta^(7/6) nu (2,1,3,2,1)", Measure::radial_density(d, 7.0 / 6.0), o21321},
      {"delta^2 nu (2,1,3,2,1)", Measure::radial_density(d, 2.0), o21321},
  };
  // The Toeplitz operator of delta nu with beta = 1 is the identity on A^2_1.
  const std::size_t identity_index = 4;
  double identity = NAN;
  bool ok = true;
  double worst_spread = 1.0;
  int bounded = 0;
  for (std::size_t i = 0; i < battery.size(); ++i) {
    const Pair& p = battery[i];
    if (!p.op.hypothesis()) ok = false;
    const Sandwich s = run_sandwich(p.mu, p.op);
    if (i == identity_index) identity = s.estimate.value;
    const bool all_bounded = s.lower.bounded && s.estimate.bounded && s.skew.bounded;
    if (!s.agree) ok = false;
    if (all_bounded) {
      ++bounded;
      worst_spread = std::max(worst_spread, s.spread);
      if (!(s.spread <= kSandwichCap)) ok = false;
    }
    res.metrics.emplace_back(p.name, fmt("lower %.4g, ", s.lower.value) + fmt("estimate %.6g, ", s.estimate.value) +
                                         fmt("skew %.4g, ", s.skew.value) + (all_bounded ? "bounded" : "divergent") +
                                         (s.agree ? "" : " (disagree)"));
  }
  const bool identity_ok = identity >= 1.0 - kIdentityTol && identity <= 1.0;
  res.metrics.emplace_back("identity_estimate", identity);
  res.metrics.emplace_back("max_spread", worst_spread);
  res.seconds = sw.seconds();
  res.pass = ok && identity_ok && res.seconds < kSandwichSeconds;
  res.detail = fmt("%.0f pairs agree; %.0f bounded, ", static_cast<double>(battery.size()), bounded) +
               fmt("max pairwise ratio %.3g; identity estimate %.12f", worst_spread, identity);
  if (!ok) res.detail = "verdict disagreement or ratio out of range; " + res.detail;
  return res;
}

// 9. Compactness probe exponents and verdicts.
CriterionResult compactness() {
  CriterionResult res{9, "compactness probe", false, "", {}, 0.0};
  Stopwatch sw;
  const ModelDomain d(1);
  const OperatorParams op = derive_params(1, 2, 0, 2, 0, 0);
  bool ok = true;
  for (double t : {0.5, 0.0}) {
    const Measure mu = Measure::radial_density(d, t);
    const CompactnessResult c = compactness_probe(mu, op);
    const Classification cl = classify_skew_carleson(mu, op.carleson(0.5));
    const Verdict expected = t > 0 ? Verdict::vanishing : Verdict::carleson;
    if (std::abs(c.fit.exponent - t) > kSlopeTol || c.verdict != expected || cl.verdict != c.verdict) ok = false;
    res.metrics.emplace_back(fmt("exponent_t%.1f", t), c.fit.exponent);
    res.metrics.emplace_back(fmt("verdict_t%.1f", t), std::string(to_string(c.verdict)));
    res.metrics.emplace_back(fmt("classifier_t%.1f", t), std::string(to_string(cl.verdict)));
  }
  res.seconds = sw.seconds();
  res.pass = ok;
  res.detail = ok ? "exponents +0.5 and 0 with matching verdicts" : "exponent or verdict mismatch";
  return res;
}

// 10. Reweighting keeps the skew Carleson norm comparable.
CriterionResult reweighting() {
  CriterionResult res{10, "reweighting", false, "", {}, 0.0};
  Stopwatch sw;
  const ModelDomain d(1);
  struct Case {
    std::string name;
    Measure mu;
    double lambda;
  };
  const std::vector<Case> battery{
      {"t=0,lambda=1", Measure::radial_density(d, 0.0), 1.0},
      {"t=0.5,lambda=1", Measure::radial_density(d, 0.5), 1.0},
      {"t=-0.5,lambda=1", Measure::radial_density(d, -0.5), 1.0},
      {"t=1,lambda=1.5", Measure::radial_density(d, 1.0), 1.5},
      {"t=0,lambda=0.75", Measure::radial_density(d, 0.0), 0.75},
      {"atoms decay 2,lambda=1", boundary_atoms(d, 40, 2.0), 1.0},
  };
  double lo = INFINITY, hi = 0.0;
  for (const Case& c : battery) {
    const std::vector<Point> grid = sweep_grid(c.mu, SweepOptions{});
    const double base = skew_carleson_norm(c.mu, CarlesonParams(c.lambda, 0.0, 0.5), grid).value;
    for (double beta : {0.5, 1.0}) {
      const Measure rw = reweight(c.mu, beta);
      const double v = skew_carleson_norm(rw, CarlesonParams(c.lambda, beta / c.lambda, 0.5), grid).value;
      const double ratio = v / base;
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
      res.metrics.emplace_back(c.name + fmt(", beta=%.1f", beta), ratio);
    }
  }
  res.seconds = sw.seconds();
  res.pass = lo >= 0.1 && hi <= 10.0;
  res.detail = fmt("norm ratios in [%.3f, %.3f]", lo, hi);
  return res;
}

}  // namespace

std::vector<CriterionResult> run_criteria(std::uint64_t seed,
                                          const std::function<void(const CriterionResult&)>& on_result) {
  std::vector<CriterionResult> out;
  auto record = [&](CriterionResult r) {
    if (on_result) on_result(r);
    out.push_back(std::move(r));
  };
  auto guarded = [&](int id, const char* name, auto&& fn) {
    try {
      record(fn());
    } catch (const std::exception& e) {
      record(CriterionResult{id, name, false, std::string("error: ") + e.what(), {}, 0.0});
    }
  };
  guarded(1, "reproducing property", [] { return reproducing(); });
  guarded(2, "kernel normalization", [] { return normalization(); });
  guarded(3, "Berezin identity", [] { return berezin_identity(); });
  guarded(4, "geometry exactness", [&] { return geometry(seed); });
  guarded(5, "kernel estimates", [&] { return kernel_estimates(seed); });
  guarded(6, "Carleson classifier ground truth", [] { return classifier(); });
  guarded(7, "diagnostic cross-consistency", [] { return cross_consistency(); });
  guarded(8, "operator norm sandwich", [] { return sandwich(); });
  guarded(9, "compactness probe", [] { return compactness(); });
  guarded(10, "reweighting", [] { return reweighting(); });
  return out;
}

Report verify_report(const std::vector<CriterionResult>& results, std::uint64_t seed, const nlohmann::json& config) {
  Report r;
  r.subcommand = "verify";
  r.seed = seed;
  r.config = config;
  Table t{"criteria", {"id", "name", "pass", "detail"}, {}};
  std::size_t passed = 0;
  for (const CriterionResult& c : results) {
    t.rows.push_back({static_cast<double>(c.id), c.name, c.pass, c.detail});
    Section& s = r.section("criterion_" + std::to_string(c.id));
    s.add("pass", c.pass);
    for (const auto& [k, v] : c.metrics) s.add(k, v);
    r.timing.emplace_back("criterion_" + std::to_string(c.id), c.seconds);
    if (c.pass) ++passed;
  }
  r.tables.push_back(std::move(t));
  Section& summary = r.section("summary");
  summary.add("criteria", static_cast<double>(results.size()));
  summary.add("passed", static_cast<double>(passed));
  summary.add("all_pass", passed == results.size());
  return r;
}

std::vector<CriterionResult> run_acceptance(const VerifyOptions& options) {
  std::vector<CriterionResult> first = run_criteria(options.seed, options.on_result);
  if (!options.determinism) return first;
  Stopwatch sw;
  const std::string a = to_json(verify_report(first, options.seed, nullptr), false).dump();
  const std::string b = to_json(verify_report(run_criteria(options.seed), options.seed, nullptr), false).dump();
  CriterionResult det{11, "determinism", a == b, "", {}, sw.seconds()};
  det.detail = det.pass ? "second run produced byte-identical JSON" : "second run produced different JSON";
  det.metrics = {{"json_bytes", static_cast<double>(a.size())}};
  if (options.on_result) options.on_result(det);
  first.push_back(std::move(det));
  return first;
}

}  // namespace toeplab
