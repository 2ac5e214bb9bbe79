#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <string>

#include "toeplab/config.hpp"
#include "toeplab/errors.hpp"
#include "toeplab/experiments.hpp"
#include "toeplab/report.hpp"

namespace {

enum Exit { ok = 0, acceptance_failed = 1, config = 2, resource = 3, divergence = 4, io = 5, other = 6 };

int fail(int code, const char* kind, const std::exception& e) {
  std::cerr << "toeplab: " << kind << ": " << e.what() << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Toeplitz operators and skew Carleson measures on the unit ball"};
  app.set_version_flag("--version", std::string(toeplab::kToolVersion));
  app.require_subcommand(1);
  std::string config_path, out_path, format = "json";
  std::uint64_t seed = 0;
  for (const std::string& name : toeplab::subcommands()) {
    CLI::App* sub = app.add_subcommand(name, "run the " + name + " experiment");
    auto* opt = sub->add_option("--config", config_path, "experiment config (JSON)");
    if (name != "verify") opt->required();
    else opt->check(CLI::ExistingFile);
    sub->add_option("--out", out_path, "output path; stdout when omitted");
    sub->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--seed", seed, "override the config seed");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? Exit::ok : Exit::config;
  }
  const CLI::App* chosen = app.get_subcommands().front();
  const std::string subcommand = chosen->get_name();
  try {
    toeplab::ExperimentConfig cfg = config_path.empty() ? toeplab::ExperimentConfig{} : toeplab::load_config(config_path);
    if (chosen->count("--seed") > 0) cfg.seed = seed;
    const toeplab::Report report = toeplab::run(subcommand, cfg);
    for (const std::string& b : report.banners) std::cerr << "toeplab: " << b << "\n";
    toeplab::emit(report, format, out_path);
    return toeplab::report_status(report);
  } catch (const toeplab::ConfigError& e) {
    return fail(Exit::config, "config error", e);
  } catch (const toeplab::ParameterError& e) {
    return fail(Exit::config, "invalid parameters", e);
  } catch (const toeplab::DomainError& e) {
    return fail(Exit::config, "invalid point", e);
  } catch (const toeplab::ResourceError& e) {
    return fail(Exit::resource, "resource limit", e);
  } catch (const toeplab::DivergenceError& e) {
    return fail(Exit::divergence, "divergence", e);
  } catch (const toeplab::IoError& e) {
    return fail(Exit::io, "io error", e);
  } catch (const std::exception& e) {
    return fail(Exit::other, "error", e);
  }
}
