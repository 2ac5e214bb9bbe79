#include "toeplab/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "toeplab/errors.hpp"

namespace toeplab {

using nlohmann::json;

namespace {

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

// Reads the members of one JSON object and rejects keys it was not asked about.
class Fields {
 public:
  Fields(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j.is_object()) throw ConfigError(path_.empty() ? "<root>" : path_, "expected an object");
  }

  bool has(const std::string& key) {
    seen_.insert(key);
    return j_.contains(key);
  }

  const json& at(const std::string& key) {
    seen_.insert(key);
    return j_.at(key);
  }

  std::string path(const std::string& key) const { return join(path_, key); }

  void number(const std::string& key, double& out) {
    if (!has(key)) return;
    const json& v = j_.at(key);
    if (!v.is_number()) throw ConfigError(path(key), "expected a number");
    out = v.get<double>();
    if (!std::isfinite(out)) throw ConfigError(path(key), "expected a finite number");
  }

  template <class Int>
  void integer(const std::string& key, Int& out, long long lo, long long hi) {
    if (!has(key)) return;
    const json& v = j_.at(key);
    if (!v.is_number_integer()) throw ConfigError(path(key), "expected an integer");
    const long long x = v.get<long long>();
    if (x < lo || x > hi)
      throw ConfigError(path(key), "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    out = static_cast<Int>(x);
  }

  void boolean(const std::string& key, bool& out) {
    if (!has(key)) return;
    const json& v = j_.at(key);
    if (!v.is_boolean()) throw ConfigError(path(key), "expected true or false");
    out = v.get<bool>();
  }

  void string(const std::string& key, std::string& out, const std::set<std::string>& allowed) {
    if (!has(key)) return;
    const json& v = j_.at(key);
    if (!v.is_string()) throw ConfigError(path(key), "expected a string");
    out = v.get<std::string>();
    if (!allowed.empty() && !allowed.count(out)) {
      std::string list;
      for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
      throw ConfigError(path(key), "must be one of " + list);
    }
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!seen_.count(it.key())) throw ConfigError(path(it.key()), "unknown key");
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

void require(bool ok, const std::string& path, const std::string& what) {
  if (!ok) throw ConfigError(path, what);
}

cplx parse_coordinate(const json& v, const std::string& path) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
    return {v[0].get<double>(), v[1].get<double>()};
  throw ConfigError(path, "expected a number or a [re, im] pair");
}

Point parse_point(const json& v, const std::string& path, int n, bool inside) {
  require(v.is_array(), path, "expected an array of coordinates");
  require(static_cast<int>(v.size()) == n, path, "expected " + std::to_string(n) + " coordinates");
  std::vector<cplx> c;
  for (std::size_t i = 0; i < v.size(); ++i) c.push_back(parse_coordinate(v[i], path + "[" + std::to_string(i) + "]"));
  Point p(std::move(c));
  if (inside) require(p.norm_sq() < 1.0, path, "point must lie inside the unit ball");
  else require(p.norm_sq() > 0.0, path, "direction must be non-zero");
  return p;
}

std::vector<Point> parse_points(Fields& f, const std::string& key, int n) {
  std::vector<Point> out;
  if (!f.has(key)) return out;
  const json& v = f.at(key);
  require(v.is_array(), f.path(key), "expected an array of points");
  for (std::size_t i = 0; i < v.size(); ++i)
    out.push_back(parse_point(v[i], f.path(key) + "[" + std::to_string(i) + "]", n, true));
  return out;
}

json point_to_json(const Point& p) {
  json a = json::array();
  for (std::size_t i = 0; i < p.dim(); ++i) a.push_back(json::array({p[i].real(), p[i].imag()}));
  return a;
}

json points_to_json(const std::vector<Point>& ps) {
  json a = json::array();
  for (const Point& p : ps) a.push_back(point_to_json(p));
  return a;
}

}  // namespace

ExperimentConfig parse_config(const json& j) {
  ExperimentConfig cfg;
  Fields root(j, "");
  std::string schema;
  require(root.has("schema"), "schema", "missing; expected \"" + std::string(kConfigSchema) + "\"");
  root.string("schema", schema, {kConfigSchema});

  if (root.has("domain")) {
    Fields f(root.at("domain"), "domain");
    f.integer("n", cfg.n, 1, 8);
    std::string w = "smooth";
    f.string("weight", w, {"smooth", "euclidean"});
    cfg.weight = w == "smooth" ? WeightConvention::smooth : WeightConvention::euclidean;
    f.number("epsilon", cfg.epsilon);
    require(cfg.epsilon > 0.0 && cfg.epsilon < 1.0, f.path("epsilon"), "must lie in (0, 1)");
    f.finish();
  }
  const int n = cfg.n;

  if (root.has("measure")) {
    Fields f(root.at("measure"), "measure");
    MeasureSpec& m = cfg.measure;
    f.string("kind", m.kind, {"radial", "atoms", "boundary_atoms", "lattice"});
    if (m.kind == "radial") {
      f.number("t", m.t);
      require(m.t > -1.0, f.path("t"), "must exceed -1");
      f.number("outer_radius", m.outer_radius);
      require(m.outer_radius > 0.0 && m.outer_radius <= 1.0, f.path("outer_radius"), "must lie in (0, 1]");
    } else if (m.kind == "atoms") {
      m.points = parse_points(f, "points", n);
      if (f.has("weights")) {
        const json& w = f.at("weights");
        require(w.is_array(), f.path("weights"), "expected an array of numbers");
        for (std::size_t i = 0; i < w.size(); ++i) {
          const std::string p = f.path("weights") + "[" + std::to_string(i) + "]";
          require(w[i].is_number(), p, "expected a number");
          m.weights.push_back(w[i].get<double>());
          require(m.weights.back() > 0.0 && std::isfinite(m.weights.back()), p, "must be positive");
        }
      }
      require(m.weights.size() == m.points.size(), f.path("weights"), "must have one weight per point");
    } else {
      f.number("decay", m.decay);
      if (m.kind == "boundary_atoms") {
        f.integer("count", m.count, 1, 50);
        if (f.has("direction")) m.direction = parse_point(f.at("direction"), f.path("direction"), n, false);
      } else {
        f.number("r", m.lattice_r);
        require(m.lattice_r > 0.0 && m.lattice_r < 1.0, f.path("r"), "must lie in (0, 1)");
      }
    }
    f.number("scale", m.scale);
    require(m.scale > 0.0, f.path("scale"), "must be positive");
    f.finish();
  }

  if (root.has("operator")) {
    Fields f(root.at("operator"), "operator");
    OperatorSpec o;
    f.number("p1", o.p1);
    f.number("alpha1", o.alpha1);
    f.number("p2", o.p2);
    f.number("alpha2", o.alpha2);
    f.number("beta", o.beta);
    require(o.p1 > 0.0, f.path("p1"), "must be positive");
    require(o.p2 > 0.0, f.path("p2"), "must be positive");
    require(o.alpha1 > -1.0, f.path("alpha1"), "must exceed -1");
    require(o.alpha2 > -1.0, f.path("alpha2"), "must exceed -1");
    require(o.beta > -1.0, f.path("beta"), "must exceed -1");
    f.finish();
    cfg.op = o;
  }

  if (root.has("carleson")) {
    Fields f(root.at("carleson"), "carleson");
    CarlesonSpec c;
    f.number("lambda", c.lambda);
    f.number("gamma", c.gamma);
    f.number("r", c.r);
    f.number("berezin_level", c.berezin_level);
    f.boolean("lattice", c.lattice);
    require(c.lambda >= 0.0, f.path("lambda"), "must be non-negative");
    require(c.r > 0.0 && c.r < 1.0, f.path("r"), "must lie in (0, 1)");
    require(c.berezin_level >= 0.0, f.path("berezin_level"), "must be non-negative (0 selects the default)");
    f.finish();
    cfg.carleson = c;
  }

  if (root.has("grid")) {
    Fields f(root.at("grid"), "grid");
    GridSpec& g = cfg.grid;
    f.integer("count", g.count, 2, 100000);
    f.number("delta_min", g.delta_min);
    f.number("delta_max", g.delta_max);
    f.integer("angular_copies", g.angular_copies, 1, 4096);
    f.number("fit_delta_max", g.fit_delta_max);
    require(g.delta_max > 0.0 && g.delta_max < 1.0, f.path("delta_max"), "must lie in (0, 1)");
    require(g.delta_min >= 0.0 && g.delta_min < g.delta_max, f.path("delta_min"),
            "must lie in [0, delta_max) (0 selects domain.epsilon)");
    require(g.fit_delta_max > 0.0, f.path("fit_delta_max"), "must be positive");
    f.finish();
  }
  if (cfg.grid.delta_min == 0.0) cfg.grid.delta_min = cfg.epsilon;
  require(cfg.grid.delta_min < cfg.grid.delta_max, "grid.delta_min", "domain.epsilon must be below grid.delta_max");

  if (n > 1) cfg.quadrature.rule = "qmc";
  if (root.has("quadrature")) {
    Fields f(root.at("quadrature"), "quadrature");
    QuadratureSpec& q = cfg.quadrature;
    f.string("rule", q.rule, {"tensor_polar", "qmc", "monte_carlo"});
    f.integer("radial_levels", q.radial_levels, 4, 60);
    f.integer("angular_panels", q.angular_panels, 1, 1024);
    f.integer("points", q.points, 16, 100'000'000);
    f.integer("replicas", q.replicas, 2, 1024);
    f.finish();
  }
  require(cfg.quadrature.rule != "tensor_polar" || n == 1, "quadrature.rule", "tensor_polar requires n = 1");

  if (root.has("probes")) {
    Fields f(root.at("probes"), "probes");
    ProbeSpec& p = cfg.probes;
    f.integer("levels", p.levels, 1, 30);
    f.string("family", p.family, {"kernel_probe", "atom_probe", "vanishing_probe", "polynomial"});
    f.integer("trials", p.trials, 1, 1000);
    f.integer("extra_levels", p.extra_levels, 4, 40);
    if (f.has("direction")) p.direction = parse_point(f.at("direction"), f.path("direction"), n, false);
    f.finish();
  }

  if (root.has("thresholds")) {
    Fields f(root.at("thresholds"), "thresholds");
    f.number("slope_tolerance", cfg.thresholds.slope_tolerance);
    f.number("ratio_cap", cfg.thresholds.ratio_cap);
    require(cfg.thresholds.slope_tolerance > 0.0, f.path("slope_tolerance"), "must be positive");
    require(cfg.thresholds.ratio_cap >= 1.0, f.path("ratio_cap"), "must be at least 1");
    f.finish();
  }

  if (root.has("geometry")) {
    Fields f(root.at("geometry"), "geometry");
    GeometrySpec& g = cfg.geometry;
    g.points = parse_points(f, "points", n);
    f.number("radius", g.radius);
    require(g.radius > 0.0 && g.radius < 1.0, f.path("radius"), "must lie in (0, 1)");
    f.integer("mc_samples", g.mc_samples, 1000, 1'000'000'000);
    f.boolean("lattice", g.lattice);
    f.finish();
  }

  root.integer("seed", cfg.seed, 0, std::numeric_limits<long long>::max());
  root.finish();
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("<file>", "cannot read config file '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("<file>", std::string("malformed JSON: ") + e.what());
  }
  return parse_config(j);
}

json config_to_json(const ExperimentConfig& cfg) {
  json j;
  j["schema"] = kConfigSchema;
  j["domain"] = {{"n", cfg.n},
                 {"weight", cfg.weight == WeightConvention::smooth ? "smooth" : "euclidean"},
                 {"epsilon", cfg.epsilon}};
  const MeasureSpec& m = cfg.measure;
  json mj = {{"kind", m.kind}, {"scale", m.scale}};
  if (m.kind == "radial") {
    mj["t"] = m.t;
    mj["outer_radius"] = m.outer_radius;
  } else if (m.kind == "atoms") {
    mj["points"] = points_to_json(m.points);
    mj["weights"] = m.weights;
  } else if (m.kind == "boundary_atoms") {
    mj["count"] = m.count;
    mj["decay"] = m.decay;
    if (m.direction.dim()) mj["direction"] = point_to_json(m.direction);
  } else {
    mj["decay"] = m.decay;
    mj["r"] = m.lattice_r;
  }
  j["measure"] = mj;
  if (cfg.op) {
    const OperatorSpec& o = *cfg.op;
    j["operator"] = {{"p1", o.p1}, {"alpha1", o.alpha1}, {"p2", o.p2}, {"alpha2", o.alpha2}, {"beta", o.beta}};
  }
  if (cfg.carleson) {
    const CarlesonSpec& c = *cfg.carleson;
    j["carleson"] = {{"lambda", c.lambda},
                     {"gamma", c.gamma},
                     {"r", c.r},
                     {"berezin_level", c.berezin_level},
                     {"lattice", c.lattice}};
  }
  j["grid"] = {{"count", cfg.grid.count},
               {"delta_min", cfg.grid.delta_min},
               {"delta_max", cfg.grid.delta_max},
               {"angular_copies", cfg.grid.angular_copies},
               {"fit_delta_max", cfg.grid.fit_delta_max}};
  j["quadrature"] = {{"rule", cfg.quadrature.rule},
                     {"radial_levels", cfg.quadrature.radial_levels},
                     {"angular_panels", cfg.quadrature.angular_panels},
                     {"points", cfg.quadrature.points},
                     {"replicas", cfg.quadrature.replicas}};
  json pj = {{"levels", cfg.probes.levels},
             {"family", cfg.probes.family},
             {"trials", cfg.probes.trials},
             {"extra_levels", cfg.probes.extra_levels}};
  if (cfg.probes.direction.dim()) pj["direction"] = point_to_json(cfg.probes.direction);
  j["probes"] = pj;
  j["thresholds"] = {{"slope_tolerance", cfg.thresholds.slope_tolerance}, {"ratio_cap", cfg.thresholds.ratio_cap}};
  j["geometry"] = {{"points", points_to_json(cfg.geometry.points)},
                   {"radius", cfg.geometry.radius},
                   {"mc_samples", cfg.geometry.mc_samples},
                   {"lattice", cfg.geometry.lattice}};
  j["seed"] = cfg.seed;
  return j;
}

OperatorParams ExperimentConfig::operator_params() const {
  if (!op) throw ConfigError("operator", "required for this subcommand");
  return derive_params(n, op->p1, op->alpha1, op->p2, op->alpha2, op->beta);
}

CarlesonParams ExperimentConfig::carleson_params() const {
  if (carleson) return CarlesonParams(carleson->lambda, carleson->gamma, carleson->r);
  if (op) {
    const OperatorParams o = operator_params();
    if (o.lambda_zero) return CarlesonParams(0.0, 0.0, 0.5);
    return o.carleson(0.5);
  }
  throw ConfigError("carleson", "required for this subcommand (or give operator)");
}

SweepOptions ExperimentConfig::sweep_options() const {
  SweepOptions o;
  o.grid_count = grid.count;
  o.delta_min = grid.delta_min;
  o.delta_max = grid.delta_max;
  o.fit_delta_max = grid.fit_delta_max;
  o.slope_tolerance = thresholds.slope_tolerance;
  o.angular_copies = grid.angular_copies;
  o.seed = seed;
  return o;
}

ProbeOptions ExperimentConfig::probe_options() const {
  ProbeOptions o;
  o.levels = probes.levels;
  o.direction = probes.direction;
  o.r = carleson ? carleson->r : 0.5;
  o.fit_delta_max = grid.fit_delta_max;
  o.slope_tolerance = thresholds.slope_tolerance;
  o.extra_levels = probes.extra_levels;
  o.seed = seed;
  return o;
}

Measure build_measure(const ExperimentConfig& cfg) {
  const ModelDomain d = cfg.domain();
  const MeasureSpec& m = cfg.measure;
  if (m.kind == "radial") return Measure::radial_density(d, m.t, m.scale, m.outer_radius);
  if (m.kind == "atoms") {
    std::vector<double> w = m.weights;
    for (double& x : w) x *= m.scale;
    return Measure::atomic(d, m.points, w);
  }
  if (m.kind == "boundary_atoms") {
    const Point dir = m.direction.dim() ? m.direction : axis_point(d.n, 1.0);
    std::vector<Point> pts;
    std::vector<double> w;
    for (int k = 1; k <= m.count; ++k) {
      pts.push_back(along(dir, 1.0 - std::ldexp(1.0, -k)));
      w.push_back(m.scale * std::pow(boundary_distance(d, pts.back()), m.decay));
    }
    return Measure::atomic(d, std::move(pts), std::move(w));
  }
  LatticeOptions lo;
  lo.seed = cfg.seed;
  auto lattice = std::make_shared<Lattice>(build_lattice(d, m.lattice_r, cfg.epsilon, lo));
  std::vector<double> w;
  for (const Point& a : lattice->centers) w.push_back(m.scale * std::pow(boundary_distance(d, a), m.decay));
  return Measure::lattice_weighted(d, lattice, std::move(w));
}

}  // namespace toeplab
