#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "json.hpp"

namespace toeplab {

inline constexpr const char* kReportSchema = "toeplab-report/1";
inline constexpr const char* kToolVersion = "1.0.0";

/// A report cell. Non-finite numbers are written as null (NaN) or the strings
/// "Infinity" / "-Infinity" and read back as numbers.
using Value = std::variant<double, bool, std::string>;

bool same_value(const Value& a, const Value& b);

/// Named scalar results: verdicts, fitted exponents, residuals, flags.
struct Section {
  std::string name;
  std::vector<std::pair<std::string, Value>> values;

  Section& add(std::string key, Value v);
  const Value* find(const std::string& key) const;
};

/// One row per grid center or probe, columns in a fixed order.
struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<Value>> rows;
};

struct Report {
  std::string schema = kReportSchema;
  std::string tool_version = kToolVersion;
  std::string subcommand;
  std::uint64_t seed = 0;
  nlohmann::json config;
  /// Warnings shown with every result, e.g. a violated hypothesis.
  std::vector<std::string> banners;
  std::vector<Section> sections;
  std::vector<Table> tables;
  /// Wall-clock seconds; excluded from comparisons.
  std::vector<std::pair<std::string, double>> timing;

  Section& section(const std::string& name);
  const Section* find_section(const std::string& name) const;
  const Table* find_table(const std::string& name) const;
};

nlohmann::json to_json(const Report& r, bool include_timing = true);
Report report_from_json(const nlohmann::json& j);
/// Equality of everything except timing; NaN equals NaN.
bool same_content(const Report& a, const Report& b);

std::string to_csv(const Table& t);

/// Writes the report. json: one file at path (stdout when empty). csv: one file
/// per table named <stem>_<table>.csv next to path, or all tables to stdout
/// separated by "# <table>" lines. Throws IoError when a file cannot be written.
void emit(const Report& r, const std::string& format, const std::string& path);

}  // namespace toeplab
