#include "toeplab/report.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "toeplab/errors.hpp"

namespace toeplab {

using nlohmann::json;

namespace {

json value_to_json(const Value& v) {
  if (const double* d = std::get_if<double>(&v)) {
    if (std::isnan(*d)) return nullptr;
    if (std::isinf(*d)) return *d > 0 ? "Infinity" : "-Infinity";
    return *d;
  }
  if (const bool* b = std::get_if<bool>(&v)) return *b;
  return std::get<std::string>(v);
}

Value value_from_json(const json& j) {
  if (j.is_null()) return NAN;
  if (j.is_boolean()) return j.get<bool>();
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "Infinity") return INFINITY;
    if (s == "-Infinity") return -INFINITY;
    return s;
  }
  throw ParameterError("report: unexpected JSON value " + j.dump());
}

std::string csv_cell(const Value& v) {
  if (const double* d = std::get_if<double>(&v)) {
    if (std::isnan(*d)) return "nan";
    if (std::isinf(*d)) return *d > 0 ? "inf" : "-inf";
    std::ostringstream os;
    os.precision(17);
    os << *d;
    return os.str();
  }
  if (const bool* b = std::get_if<bool>(&v)) return *b ? "true" : "false";
  const std::string& s = std::get<std::string>(v);
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << text;
  out.flush();
  if (!out) throw IoError("failed writing '" + path + "'");
}

}  // namespace

bool same_value(const Value& a, const Value& b) {
  if (a.index() != b.index()) return false;
  if (const double* x = std::get_if<double>(&a)) {
    const double y = std::get<double>(b);
    return (std::isnan(*x) && std::isnan(y)) || *x == y;
  }
  return a == b;
}

Section& Section::add(std::string key, Value v) {
  values.emplace_back(std::move(key), std::move(v));
  return *this;
}

const Value* Section::find(const std::string& key) const {
  for (const auto& [k, v] : values)
    if (k == key) return &v;
  return nullptr;
}

Section& Report::section(const std::string& name) {
  for (Section& s : sections)
    if (s.name == name) return s;
  sections.push_back(Section{name, {}});
  return sections.back();
}

const Section* Report::find_section(const std::string& name) const {
  for (const Section& s : sections)
    if (s.name == name) return &s;
  return nullptr;
}

const Table* Report::find_table(const std::string& name) const {
  for (const Table& t : tables)
    if (t.name == name) return &t;
  return nullptr;
}

json to_json(const Report& r, bool include_timing) {
  json j;
  j["schema"] = r.schema;
  j["tool_version"] = r.tool_version;
  j["subcommand"] = r.subcommand;
  j["seed"] = r.seed;
  j["config"] = r.config;
  j["banners"] = r.banners;
  json sections = json::array();
  for (const Section& s : r.sections) {
    json values = json::array();
    for (const auto& [k, v] : s.values) values.push_back(json::array({k, value_to_json(v)}));
    sections.push_back({{"name", s.name}, {"values", values}});
  }
  j["sections"] = sections;
  json tables = json::array();
  for (const Table& t : r.tables) {
    json rows = json::array();
    for (const auto& row : t.rows) {
      json jr = json::array();
      for (const Value& v : row) jr.push_back(value_to_json(v));
      rows.push_back(jr);
    }
    tables.push_back({{"name", t.name}, {"columns", t.columns}, {"rows", rows}});
  }
  j["tables"] = tables;
  if (include_timing) {
    json timing = json::array();
    for (const auto& [k, v] : r.timing) timing.push_back(json::array({k, v}));
    j["timing"] = timing;
  }
  return j;
}

Report report_from_json(const json& j) {
  Report r;
  r.schema = j.at("schema").get<std::string>();
  if (r.schema != kReportSchema) throw ParameterError("report: unsupported schema '" + r.schema + "'");
  r.tool_version = j.at("tool_version").get<std::string>();
  r.subcommand = j.at("subcommand").get<std::string>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.config = j.at("config");
  r.banners = j.at("banners").get<std::vector<std::string>>();
  for (const json& s : j.at("sections")) {
    Section sec{s.at("name").get<std::string>(), {}};
    for (const json& kv : s.at("values")) sec.values.emplace_back(kv.at(0).get<std::string>(), value_from_json(kv.at(1)));
    r.sections.push_back(std::move(sec));
  }
  for (const json& t : j.at("tables")) {
    Table tab{t.at("name").get<std::string>(), t.at("columns").get<std::vector<std::string>>(), {}};
    for (const json& row : t.at("rows")) {
      std::vector<Value> vals;
      for (const json& v : row) vals.push_back(value_from_json(v));
      tab.rows.push_back(std::move(vals));
    }
    r.tables.push_back(std::move(tab));
  }
  if (j.contains("timing"))
    for (const json& kv : j.at("timing")) r.timing.emplace_back(kv.at(0).get<std::string>(), kv.at(1).get<double>());
  return r;
}

bool same_content(const Report& a, const Report& b) {
  if (a.schema != b.schema || a.tool_version != b.tool_version || a.subcommand != b.subcommand || a.seed != b.seed ||
      a.config != b.config || a.banners != b.banners || a.sections.size() != b.sections.size() ||
      a.tables.size() != b.tables.size())
    return false;
  for (std::size_t i = 0; i < a.sections.size(); ++i) {
    const Section &x = a.sections[i], &y = b.sections[i];
    if (x.name != y.name || x.values.size() != y.values.size()) return false;
    for (std::size_t k = 0; k < x.values.size(); ++k)
      if (x.values[k].first != y.values[k].first || !same_value(x.values[k].second, y.values[k].second)) return false;
  }
  for (std::size_t i = 0; i < a.tables.size(); ++i) {
    const Table &x = a.tables[i], &y = b.tables[i];
    if (x.name != y.name || x.columns != y.columns || x.rows.size() != y.rows.size()) return false;
    for (std::size_t r = 0; r < x.rows.size(); ++r) {
      if (x.rows[r].size() != y.rows[r].size()) return false;
      for (std::size_t c = 0; c < x.rows[r].size(); ++c)
        if (!same_value(x.rows[r][c], y.rows[r][c])) return false;
    }
  }
  return true;
}

std::string to_csv(const Table& t) {
  std::string out;
  for (std::size_t c = 0; c < t.columns.size(); ++c) out += (c ? "," : "") + csv_cell(t.columns[c]);
  out += "\n";
  for (const auto& row : t.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) out += (c ? "," : "") + csv_cell(row[c]);
    out += "\n";
  }
  return out;
}

void emit(const Report& r, const std::string& format, const std::string& path) {
  if (format == "json") {
    const std::string text = to_json(r).dump(2) + "\n";
    if (path.empty()) std::cout << text;
    else write_file(path, text);
    return;
  }
  if (format != "csv") throw ParameterError("emit: format must be json or csv");
  if (path.empty()) {
    for (const Table& t : r.tables) std::cout << "# " << t.name << "\n" << to_csv(t);
    return;
  }
  const std::filesystem::path p(path);
  const std::filesystem::path dir = p.parent_path();
  const std::string stem = p.stem().string();
  for (const Table& t : r.tables) write_file((dir / (stem + "_" + t.name + ".csv")).string(), to_csv(t));
}

}  // namespace toeplab
