#include "toeplab/experiments.hpp"

#include <chrono>
#include <cmath>

#include "toeplab/errors.hpp"
#include "toeplab/kernels.hpp"
#include "toeplab/measures.hpp"
#include "toeplab/quadrature.hpp"
#include "toeplab/toeplitz.hpp"
#include "toeplab/verify.hpp"

namespace toeplab {

namespace {

void add_fit(Section& s, const std::string& prefix, const PowerFit& fit) {
  s.add(prefix + "slope", fit.exponent);
  s.add(prefix + "residual", fit.residual);
  s.add(prefix + "fit_points", static_cast<double>(fit.points));
}

void add_classification(Section& s, const Classification& c) {
  s.add("verdict", std::string(to_string(c.verdict)));
  add_fit(s, "", c.fit);
  s.add("deepest_delta", c.deepest_delta);
  s.add("norm", c.norm);
  s.add("diagnostic", c.diagnostic);
}

Table shell_table(const std::string& name, const Classification& c) {
  Table t{name, {"delta", "value"}, {}};
  for (std::size_t i = 0; i < c.shell_delta.size(); ++i) t.rows.push_back({c.shell_delta[i], c.shell_value[i]});
  return t;
}

std::vector<Value> point_cells(const Point& z) {
  std::vector<Value> out;
  for (std::size_t i = 0; i < z.dim(); ++i) {
    out.push_back(z[i].real());
    out.push_back(z[i].imag());
  }
  return out;
}

std::vector<std::string> point_columns(int n) {
  if (n == 1) return {"center_re", "center_im"};
  std::vector<std::string> c;
  for (int i = 1; i <= n; ++i) {
    c.push_back("center" + std::to_string(i) + "_re");
    c.push_back("center" + std::to_string(i) + "_im");
  }
  return c;
}

Table center_table(const std::string& name, int n, const std::vector<std::string>& extra) {
  Table t{name, point_columns(n), {}};
  t.columns.push_back("delta");
  for (const auto& e : extra) t.columns.push_back(e);
  return t;
}

void operator_section(Report& r, const OperatorParams& op) {
  Section& s = r.section("parameters");
  s.add("n", static_cast<double>(op.n));
  s.add("p1", op.p1).add("alpha1", op.alpha1).add("p2", op.p2).add("alpha2", op.alpha2).add("beta", op.beta);
  s.add("lambda", op.lambda);
  s.add("gamma", op.gamma);
  s.add("theta", op.lambda_zero ? NAN : op.theta());
  s.add("lambda_zero", op.lambda_zero);
  s.add("hypothesis1", op.hypothesis1);
  s.add("hypothesis2", op.hypothesis2);
  s.add("hypothesis", op.hypothesis());
  if (!op.hypothesis()) {
    std::string which = !op.hypothesis1 && !op.hypothesis2 ? "j = 1, 2" : (!op.hypothesis1 ? "j = 1" : "j = 2");
    r.banners.push_back("hypothesis violated (" + which +
                        "): n+1+beta > n max(1, 1/p_j) + (1+alpha_j)/p_j fails; results are exploratory");
  }
  if (op.lambda_zero)
    r.banners.push_back("lambda = 0: gamma is undefined and no verdict is issued in this regime");
}

QuadratureRule config_rule(const ExperimentConfig& cfg, const Point& focus) {
  const ModelDomain d = cfg.domain();
  const QuadratureSpec& q = cfg.quadrature;
  if (q.rule == "qmc") return qmc_rule(d, q.points, q.replicas, cfg.seed);
  if (q.rule == "monte_carlo") return monte_carlo_rule(d, q.points, q.replicas, cfg.seed);
  PolarRuleOptions o;
  o.focus = {focus};
  o.radial_levels = std::max(q.radial_levels,
                             static_cast<int>(std::ceil(std::log2(1.0 / (1.0 - focus.norm())))) + 20);
  o.angular_panels = q.angular_panels;
  return polar_rule(d, o);
}

void run_params(Report& r, const ExperimentConfig& cfg) { operator_section(r, cfg.operator_params()); }

void run_geometry(Report& r, const ExperimentConfig& cfg) {
  const ModelDomain d = cfg.domain();
  const GeometrySpec& g = cfg.geometry;
  const std::vector<Point> points = g.points.empty() ? radial_grid(d, 8, cfg.epsilon, 0.5) : g.points;
  Table t = center_table("balls", d.n,
                         {"radius", "volume_closed", "volume_numeric", "volume_mc", "mc_error", "mc_sigmas",
                          "kobayashi_to_origin", "delta_ratio_min", "delta_ratio_max"});
  double worst_rel = 0.0, worst_sigma = 0.0;
  int unresolved = 0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const Point& a = points[i];
    const KobayashiBall b(a, g.radius);
    const double closed = ball_volume_closed_form(d, b);
    const double numeric = ball_volume_numeric(d, b, 0.0);
    const Estimate mc = monte_carlo_oracle(d, [&](const Point& z) { return b.contains(z) ? 1.0 : 0.0; }, 0.0,
                                           g.mc_samples, cfg.seed + i);
    const DeltaRange dr = delta_comparability_check(d, a, g.radius, 2000);
    // A ball too small for any sample to land in has no usable error bar.
    const double sigmas = mc.error > 0.0 ? std::abs(mc.value - closed) / mc.error : NAN;
    worst_rel = std::max(worst_rel, std::abs(numeric / closed - 1.0));
    if (std::isnan(sigmas)) ++unresolved;
    else worst_sigma = std::max(worst_sigma, sigmas);
    std::vector<Value> row = point_cells(a);
    for (double v : {boundary_distance(d, a), g.radius, closed, numeric, mc.value, mc.error, sigmas,
                     kobayashi_distance(d, Point(std::vector<cplx>(d.n, 0.0)), a), dr.min, dr.max})
      row.push_back(v);
    t.rows.push_back(std::move(row));
  }
  r.tables.push_back(std::move(t));
  Section& s = r.section("volumes");
  s.add("max_relative_difference", worst_rel);
  s.add("max_mc_sigmas", worst_sigma);
  s.add("mc_unresolved_balls", static_cast<double>(unresolved));
  if (g.lattice) {
    LatticeOptions lo;
    lo.seed = cfg.seed;
    const Lattice lat = build_lattice(d, g.radius, cfg.epsilon, lo);
    const LatticeCheck chk = check_lattice(lat, sample_truncated_domain(d, cfg.epsilon, 20000, cfg.seed));
    Section& l = r.section("lattice");
    l.add("r", lat.r);
    l.add("epsilon", lat.boundary_cutoff);
    l.add("centers", static_cast<double>(lat.centers.size()));
    l.add("candidates", static_cast<double>(lat.candidates));
    l.add("overlap_bound", static_cast<double>(lat.overlap_bound));
    l.add("covering_radius", lat.covering_radius);
    l.add("min_separation", lat.min_separation);
    l.add("check_samples", static_cast<double>(chk.samples));
    l.add("check_uncovered", static_cast<double>(chk.uncovered));
    l.add("check_max_overlap", static_cast<double>(chk.max_overlap));
  }
}

void carleson_header(Report& r, const ExperimentConfig& cfg, const CarlesonParams& cp) {
  Section& s = r.section("carleson");
  s.add("lambda", cp.lambda).add("gamma", cp.gamma).add("r", cp.r).add("theta", cp.theta(cfg.n));
  s.add("measure", build_measure(cfg).describe());
  if (cp.lambda == 0.0) r.banners.push_back("lambda = 0: diagnostics are reported without a verdict");
}

void run_carleson(Report& r, const ExperimentConfig& cfg) {
  const ModelDomain d = cfg.domain();
  const Measure mu = build_measure(cfg);
  const CarlesonParams cp = cfg.carleson_params();
  const SweepOptions so = cfg.sweep_options();
  carleson_header(r, cfg, cp);
  Classification c = classify_skew_carleson(mu, cp, so);
  if (cp.lambda == 0.0) c.verdict = Verdict::inconclusive;
  Section& s = r.section("classification");
  add_classification(s, c);
  if (cp.lambda == 0.0) s.values[0].second = std::string("none");
  const bool sup = cp.lambda >= 1.0;
  const std::vector<Point> grid = sup ? sweep_grid(mu, so) : radial_grid(d, so.grid_count, so.delta_min, so.delta_max);
  Table t = center_table("sweep", d.n, {"mu_hat", "quantity"});
  const double exponent = sup ? cp.lambda : 1.0;
  for (const Point& z : grid) {
    const double delta = boundary_distance(d, z);
    const double mh = mu_hat(mu, z, cp.r, exponent);
    std::vector<Value> row = point_cells(z);
    row.push_back(delta);
    row.push_back(mh);
    row.push_back(mh * std::pow(delta, -cp.gamma * cp.lambda));
    t.rows.push_back(std::move(row));
  }
  r.tables.push_back(std::move(t));
  r.tables.push_back(shell_table("shells", c));
  if (cfg.carleson && cfg.carleson->lattice) {
    LatticeOptions lo;
    lo.seed = cfg.seed;
    const Lattice lat = build_lattice(d, cp.r, so.delta_min, lo);
    const Classification lc = lattice_diagnostic(mu, cp, lat, so);
    Section& ls = r.section("lattice");
    add_classification(ls, lc);
    ls.add("centers", static_cast<double>(lat.centers.size()));
    ls.add("agrees_with_sup", lc.verdict == c.verdict);
  }
}

void run_berezin(Report& r, const ExperimentConfig& cfg) {
  const ModelDomain d = cfg.domain();
  const Measure mu = build_measure(cfg);
  const CarlesonParams cp = cfg.carleson_params();
  const SweepOptions so = cfg.sweep_options();
  carleson_header(r, cfg, cp);
  double level = cfg.carleson ? cfg.carleson->berezin_level : 0.0;
  if (level == 0.0) level = default_berezin_level(d.n, cp);
  const Classification c = berezin_diagnostic(mu, cp, level, so);
  Section& s = r.section("berezin");
  s.add("level", level);
  add_classification(s, c);
  Table t = center_table("values", d.n, {"berezin", "berezin_quadrature", "quadrature_error", "divergence_warning"});
  double worst_err = 0.0;
  for (const Point& z : radial_grid(d, so.grid_count, so.delta_min, so.delta_max)) {
    const BerezinValue exact = berezin_value(mu, z, level);
    BerezinValue quad = exact;
    if (mu.is_radial()) quad = berezin_transform(mu, z, level, config_rule(cfg, z));
    if (std::isfinite(quad.error)) worst_err = std::max(worst_err, quad.error);
    std::vector<Value> row = point_cells(z);
    row.push_back(boundary_distance(d, z));
    row.push_back(exact.value);
    row.push_back(quad.value);
    row.push_back(quad.error);
    row.push_back(quad.divergence_warning || exact.divergence_warning);
    t.rows.push_back(std::move(row));
  }
  s.add("max_quadrature_error", worst_err);
  s.add("quadrature_rule", cfg.quadrature.rule);
  r.tables.push_back(std::move(t));
  if (mu.is_radial() && berezin_divergence_warning(d.n, level, mu.density().t))
    r.banners.push_back("divergence warning: s(n+1)/2 >= n+1+t for this density");
}

void run_toeplitz(Report& r, const ExperimentConfig& cfg) {
  const ModelDomain d = cfg.domain();
  const Measure mu = build_measure(cfg);
  const OperatorParams op = cfg.operator_params();
  operator_section(r, op);
  if (op.lambda_zero) return;
  const ProbeOptions po = cfg.probe_options();
  const Sandwich sw = run_sandwich(mu, op, po, cfg.sweep_options());
  Section& s = r.section("sandwich");
  s.add("measure", mu.describe());
  s.add("lower_sup", sw.lower.value);
  add_fit(s, "lower_", sw.lower.fit);
  s.add("lower_bounded", sw.lower.bounded);
  s.add("estimate", sw.estimate.value);
  add_fit(s, "estimate_", sw.estimate.fit);
  s.add("estimate_bounded", sw.estimate.bounded);
  s.add("skew_norm", sw.skew.value);
  s.add("skew_verdict", std::string(to_string(sw.skew_verdict)));
  add_fit(s, "skew_", sw.skew.fit);
  s.add("skew_bounded", sw.skew.bounded);
  s.add("agree", sw.agree);
  s.add("spread", sw.spread);
  const bool all_bounded = sw.lower.bounded && sw.estimate.bounded && sw.skew.bounded;
  s.add("within_ratio_cap", !all_bounded || sw.spread <= cfg.thresholds.ratio_cap);
  s.add("ratio_cap", cfg.thresholds.ratio_cap);
  Table lt = center_table("lower_probes", d.n, {"ball_mass", "value", "kernel_action", "kernel_norm"});
  for (const LowerProbe& p : sw.lower_probes) {
    std::vector<Value> row = point_cells(p.center);
    for (double v : {p.delta, p.ball_mass, p.value, p.kernel_action, p.kernel_norm}) row.push_back(v);
    lt.rows.push_back(std::move(row));
  }
  r.tables.push_back(std::move(lt));
  auto probe_table = [](const std::string& name, const NormEstimate& est) {
    Table t{name, {"label", "delta", "input_norm", "output_norm", "ratio", "error"}, {}};
    for (const ProbeRecord& p : est.probes)
      t.rows.push_back({p.label, p.delta, p.input_norm, p.output_norm, p.ratio, p.error});
    return t;
  };
  r.tables.push_back(probe_table("norm_probes", sw.norm));
  const ProbeFamily family = probe_family_from_string(cfg.probes.family);
  if (family != ProbeFamily::kernel_probe) {
    const NormEstimate est = estimate_operator_norm(mu, op, family, cfg.probes.trials, po);
    Section& f = r.section("family_estimate");
    f.add("family", cfg.probes.family);
    f.add("estimate", est.value);
    f.add("skipped", static_cast<double>(est.skipped));
    for (const auto& msg : est.diagnostics) r.banners.push_back(msg);
    r.tables.push_back(probe_table("family_probes", est));
  }
}

void run_vanishing(Report& r, const ExperimentConfig& cfg) {
  const Measure mu = build_measure(cfg);
  const OperatorParams op = cfg.operator_params();
  operator_section(r, op);
  if (op.lambda_zero) return;
  const CompactnessResult c = compactness_probe(mu, op, cfg.probe_options());
  Section& s = r.section("compactness");
  s.add("measure", mu.describe());
  s.add("verdict", std::string(to_string(c.verdict)));
  add_fit(s, "", c.fit);
  s.add("diagnostic", c.diagnostic);
  const Classification cl = classify_skew_carleson(mu, op.carleson(cfg.probe_options().r), cfg.sweep_options());
  s.add("classifier_verdict", std::string(to_string(cl.verdict)));
  s.add("classifier_slope", cl.fit.exponent);
  s.add("agree", cl.verdict == c.verdict);
  Table t{"probes", {"delta", "norm"}, {}};
  for (std::size_t i = 0; i < c.deltas.size(); ++i) t.rows.push_back({c.deltas[i], c.norms[i]});
  r.tables.push_back(std::move(t));
}

}  // namespace

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names{"params", "geometry", "carleson", "berezin",
                                              "toeplitz", "vanishing", "verify"};
  return names;
}

Report run(const std::string& subcommand, const ExperimentConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  if (subcommand == "verify") {
    Report r = verify_report(run_acceptance(VerifyOptions{cfg.seed, true, {}}), cfg.seed, config_to_json(cfg));
    r.timing.emplace_back(
        "total", std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
    return r;
  }
  Report r;
  r.subcommand = subcommand;
  r.seed = cfg.seed;
  r.config = config_to_json(cfg);
  if (subcommand == "params") run_params(r, cfg);
  else if (subcommand == "geometry") run_geometry(r, cfg);
  else if (subcommand == "carleson") run_carleson(r, cfg);
  else if (subcommand == "berezin") run_berezin(r, cfg);
  else if (subcommand == "toeplitz") run_toeplitz(r, cfg);
  else if (subcommand == "vanishing") run_vanishing(r, cfg);
  else throw ParameterError("unknown subcommand '" + subcommand + "'");
  r.timing.emplace_back("total", std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
  return r;
}

int report_status(const Report& r) {
  if (r.subcommand != "verify") return 0;
  const Section* s = r.find_section("summary");
  if (!s) return 1;
  const Value* v = s->find("all_pass");
  return v && std::holds_alternative<bool>(*v) && std::get<bool>(*v) ? 0 : 1;
}

}  // namespace toeplab
