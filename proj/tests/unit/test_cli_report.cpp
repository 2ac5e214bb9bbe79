#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "toeplab/config.hpp"
#include "toeplab/errors.hpp"
#include "toeplab/experiments.hpp"
#include "toeplab/report.hpp"

using namespace toeplab;
using nlohmann::json;

namespace {

json base_config() {
  return json::parse(R"({
    "schema": "toeplab-config/1",
    "domain": {"n": 1, "weight": "smooth", "epsilon": 0.001},
    "measure": {"kind": "radial", "t": 0.0},
    "carleson": {"lambda": 1.0, "gamma": 0.0, "r": 0.5},
    "seed": 3
  })");
}

std::string config_error_path(const json& j) {
  try {
    parse_config(j);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

std::size_t count_lines(const std::string& s) {
  std::size_t n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

}  // namespace

TEST_CASE("config parsing and defaults") {
  const ExperimentConfig cfg = parse_config(base_config());
  CHECK(cfg.n == 1);
  CHECK(cfg.seed == 3);
  CHECK(cfg.grid.delta_min == doctest::Approx(0.001));
  CHECK(cfg.quadrature.rule == "tensor_polar");
  CHECK_FALSE(cfg.op.has_value());
  CHECK_THROWS_AS(cfg.operator_params(), ConfigError);
  const ExperimentConfig again = parse_config(config_to_json(cfg));
  CHECK(config_to_json(again) == config_to_json(cfg));
  json two = base_config();
  two["domain"]["n"] = 2;
  CHECK(parse_config(two).quadrature.rule == "qmc");
}

TEST_CASE("config errors name the offending field") {
  json j = base_config();
  j["measure"]["colour"] = "blue";
  CHECK(config_error_path(j).find("measure.colour") != std::string::npos);
  j = base_config();
  j["measure"]["t"] = -2.0;
  CHECK(config_error_path(j).find("measure.t") != std::string::npos);
  j = base_config();
  j["domain"]["weight"] = "hyperbolic";
  CHECK(config_error_path(j).find("domain.weight") != std::string::npos);
  j = base_config();
  j["operator"] = {{"p1", 0.0}};
  CHECK(config_error_path(j).find("operator.p1") != std::string::npos);
  j = base_config();
  j.erase("schema");
  CHECK(config_error_path(j).find("schema") != std::string::npos);
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("atom points accept real and complex coordinates") {
  json j = base_config();
  j["measure"] = {{"kind", "atoms"}, {"points", {{0.5}, {json::array({0.1, 0.2})}}}, {"weights", {1.0, 2.0}}};
  const ExperimentConfig cfg = parse_config(j);
  const Measure mu = build_measure(cfg);
  REQUIRE(mu.atom_points().size() == 2);
  CHECK(mu.atom_points()[1][0] == cplx(0.1, 0.2));
  j["measure"]["points"] = {{1.5}};
  j["measure"]["weights"] = {1.0};
  CHECK(config_error_path(j).find("measure.points[0]") != std::string::npos);
}

TEST_CASE("report JSON round trip") {
  Report r;
  r.subcommand = "carleson";
  r.seed = 9;
  r.config = base_config();
  r.banners.push_back("note");
  r.section("values").add("x", 1.5).add("nan", NAN).add("inf", INFINITY).add("flag", true).add("word", std::string("a,b"));
  r.tables.push_back(Table{"t", {"a", "b"}, {{1.0, std::string("q\"uote")}, {NAN, false}}});
  r.timing.emplace_back("total", 0.25);
  const Report back = report_from_json(json::parse(to_json(r).dump()));
  CHECK(same_content(r, back));
  CHECK(back.timing.size() == 1);
  Report empty;
  const json ej = to_json(empty);
  CHECK(ej["tables"].is_array());
  CHECK(ej["tables"].empty());
  CHECK(same_content(empty, report_from_json(ej)));
}

TEST_CASE("CSV export") {
  Table t{"sweep", {"delta", "value"}, {}};
  for (int i = 0; i < 50; ++i) t.rows.push_back({std::ldexp(1.0, -i), static_cast<double>(i)});
  const std::string csv = to_csv(t);
  CHECK(count_lines(csv) == 51);
  CHECK(csv.rfind("delta,value\n", 0) == 0);
  CHECK(csv.find('\r') == std::string::npos);
  Table q{"q", {"s"}, {{std::string("a,\"b\"")}}};
  CHECK(to_csv(q) == "s\n\"a,\"\"b\"\"\"\n");
}

TEST_CASE("emit writes files and reports unwritable paths") {
  Report r;
  r.subcommand = "params";
  r.tables.push_back(Table{"sweep", {"x"}, {{1.0}, {2.0}}});
  const std::filesystem::path dir = std::filesystem::temp_directory_path() / "toeplab_emit_test";
  std::filesystem::create_directories(dir);
  emit(r, "json", (dir / "out.json").string());
  std::ifstream in(dir / "out.json");
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(same_content(report_from_json(json::parse(ss.str())), r));
  emit(r, "csv", (dir / "out.csv").string());
  CHECK(std::filesystem::exists(dir / "out_sweep.csv"));
  CHECK_THROWS_AS(emit(r, "json", "/nonexistent/dir/out.json"), IoError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("params experiment") {
  json j = base_config();
  j["operator"] = {{"p1", 2}, {"alpha1", 0}, {"p2", 2}, {"alpha2", 0}, {"beta", 1}};
  j["domain"]["n"] = 2;
  const Report r = run("params", parse_config(j));
  const Section* s = r.find_section("parameters");
  REQUIRE(s);
  CHECK(std::get<double>(*s->find("lambda")) == doctest::Approx(1.0));
  CHECK(std::get<double>(*s->find("gamma")) == doctest::Approx(1.0));
  CHECK(std::get<bool>(*s->find("hypothesis")));
  CHECK(r.banners.empty());
  CHECK(report_status(r) == 0);
  CHECK(r.config == config_to_json(parse_config(j)));
  j["operator"]["beta"] = -0.9;
  CHECK_FALSE(run("params", parse_config(j)).banners.empty());
}

TEST_CASE("carleson experiment") {
  json j = base_config();
  j["carleson"]["lattice"] = true;
  const Report r = run("carleson", parse_config(j));
  const Section* s = r.find_section("classification");
  REQUIRE(s);
  CHECK(std::get<std::string>(*s->find("verdict")) == "carleson");
  CHECK(s->find("slope"));
  CHECK(s->find("residual"));
  CHECK(s->find("deepest_delta"));
  const Table* t = r.find_table("sweep");
  REQUIRE(t);
  CHECK(t->rows.size() == 48);
  CHECK(std::get<bool>(*r.find_section("lattice")->find("agrees_with_sup")));
  CHECK_THROWS_AS(run("bogus", parse_config(j)), ParameterError);
}

TEST_CASE("vanishing and toeplitz experiments") {
  json j = base_config();
  j.erase("carleson");
  j["measure"]["t"] = 0.5;
  j["operator"] = {{"p1", 2}, {"alpha1", 0}, {"p2", 2}, {"alpha2", 0}, {"beta", 0}};
  j["probes"] = {{"levels", 8}};
  const ExperimentConfig cfg = parse_config(j);
  const Report v = run("vanishing", cfg);
  CHECK(std::get<std::string>(*v.find_section("compactness")->find("verdict")) == "vanishing");
  CHECK(std::get<bool>(*v.find_section("compactness")->find("agree")));
  const Report t = run("toeplitz", cfg);
  CHECK(std::get<bool>(*t.find_section("sandwich")->find("agree")));
  CHECK(t.find_table("lower_probes")->rows.size() == 8);
}
