#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "toeplab/geometry.hpp"
#include "toeplab/measures.hpp"
#include "toeplab/toeplitz.hpp"

namespace toeplab {

inline constexpr const char* kConfigSchema = "toeplab-config/1";

struct MeasureSpec {
  /// radial | atoms | boundary_atoms | lattice
  std::string kind = "radial";
  double t = 0.0;
  double scale = 1.0;
  double outer_radius = 1.0;
  std::vector<Point> points;
  std::vector<double> weights;
  /// boundary_atoms: atoms at (1 - 2^-k) direction, k = 1..count; boundary_atoms
  /// and lattice: weights delta(a)^decay.
  int count = 30;
  double decay = 2.0;
  Point direction;
  double lattice_r = 0.5;
};

struct OperatorSpec {
  double p1 = 2.0, alpha1 = 0.0, p2 = 2.0, alpha2 = 0.0, beta = 0.0;
};

struct CarlesonSpec {
  double lambda = 1.0;
  double gamma = 0.0;
  double r = 0.5;
  double berezin_level = 0.0;  // 0 selects the default level
  bool lattice = false;        // also run the lattice diagnostic
};

struct GridSpec {
  std::size_t count = 48;
  double delta_min = 0.0;  // 0 selects the domain epsilon
  double delta_max = 0.5;
  std::size_t angular_copies = 32;
  double fit_delta_max = 0.1;
};

struct QuadratureSpec {
  std::string rule = "tensor_polar";  // tensor_polar | qmc | monte_carlo; qmc is the default for n > 1
  int radial_levels = 40;
  int angular_panels = 8;
  std::size_t points = 20000;  // per replica, statistical rules
  std::size_t replicas = 8;
};

struct ProbeSpec {
  int levels = 10;
  std::string family = "kernel_probe";
  std::size_t trials = 4;
  int extra_levels = 22;
  Point direction;  // empty selects e_1
};

struct ThresholdSpec {
  double slope_tolerance = 0.1;
  double ratio_cap = 100.0;
};

struct GeometrySpec {
  std::vector<Point> points;  // empty selects a radial grid
  double radius = 0.5;
  std::size_t mc_samples = 1'000'000;
  bool lattice = true;
};

/// One experiment. Every field has a documented default; unknown keys are errors.
struct ExperimentConfig {
  int n = 1;
  WeightConvention weight = WeightConvention::smooth;
  double epsilon = 1e-3;
  MeasureSpec measure;
  std::optional<OperatorSpec> op;
  std::optional<CarlesonSpec> carleson;
  GridSpec grid;
  QuadratureSpec quadrature;
  ProbeSpec probes;
  ThresholdSpec thresholds;
  GeometrySpec geometry;
  std::uint64_t seed = 1;

  ModelDomain domain() const { return ModelDomain(n, weight); }
  OperatorParams operator_params() const;
  /// Explicit Carleson parameters, else those derived from the operator.
  CarlesonParams carleson_params() const;
  SweepOptions sweep_options() const;
  ProbeOptions probe_options() const;
};

/// Parses a config tree. Throws ConfigError naming the offending field path.
ExperimentConfig parse_config(const nlohmann::json& j);
/// Reads and parses a config file; unreadable or malformed files are ConfigErrors.
ExperimentConfig load_config(const std::string& path);
/// The config with all defaults filled in, in the input schema.
nlohmann::json config_to_json(const ExperimentConfig& cfg);

Measure build_measure(const ExperimentConfig& cfg);

}  // namespace toeplab
