#include "qecqm/report.hpp"

#include "qecqm/errors.hpp"

#include "json.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

namespace qecqm {

namespace fs = std::filesystem;
using json = nlohmann::json;

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

namespace {

std::string cell_text(const Cell& c) {
  struct Visitor {
    std::string operator()(std::monostate) const { return ""; }
    std::string operator()(bool b) const { return b ? "true" : "false"; }
    std::string operator()(std::int64_t i) const { return std::to_string(i); }
    std::string operator()(double d) const { return format_double(d); }
    std::string operator()(const std::string& s) const { return s; }
  };
  return std::visit(Visitor{}, c);
}

json cell_json(const Cell& c) {
  struct Visitor {
    json operator()(std::monostate) const { return nullptr; }
    json operator()(bool b) const { return b; }
    json operator()(std::int64_t i) const { return i; }
    json operator()(double d) const { return std::isfinite(d) ? json(d) : json(nullptr); }
    json operator()(const std::string& s) const { return s; }
  };
  return std::visit(Visitor{}, c);
}

void write_file(const fs::path& path, const std::string& content) {
  std::error_code ec;
  fs::create_directories(path.parent_path(), ec);
  if (ec) throw IoError("cannot create directory '" + path.parent_path().string() + "': " + ec.message());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << content;
  out.close();
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

}  // namespace

std::string table_to_csv(const Table& table) {
  std::string out;
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    if (i) out += ',';
    out += csv_field(table.columns[i]);
  }
  out += "\r\n";
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += csv_field(cell_text(row[i]));
    }
    out += "\r\n";
  }
  return out;
}

std::string report_to_json(const RunReport& report) {
  json tables = json::object();
  for (const auto& [name, t] : report.tables) {
    json rows = json::array();
    for (const auto& row : t.rows) {
      json r = json::array();
      for (const auto& c : row) r.push_back(cell_json(c));
      rows.push_back(std::move(r));
    }
    tables[name] = json{{"columns", t.columns}, {"rows", std::move(rows)}};
  }
  json errors = json::object();
  for (const auto& [k, v] : report.errors) errors[k] = v;
  const json doc{
      {"scenario", report.scenario},
      {"provenance",
       {{"config_hash", report.provenance.config_hash},
        {"tool_version", report.provenance.tool_version},
        {"seed", report.provenance.seed}}},
      {"outputs", report.requested},
      {"tables", std::move(tables)},
      {"errors", std::move(errors)},
  };
  return doc.dump(2, ' ', false, json::error_handler_t::strict) + "\n";
}

std::vector<std::string> emit_report(const RunReport& report, const std::string& dir, ReportFormat format) {
  std::vector<std::string> written;
  const fs::path base(dir);
  if (format == ReportFormat::json) {
    const fs::path p = base / (report.scenario + ".json");
    write_file(p, report_to_json(report));
    written.push_back(p.string());
    return written;
  }
  const fs::path sub = base / report.scenario;
  for (const auto& [name, t] : report.tables) {
    const fs::path p = sub / (name + ".csv");
    write_file(p, table_to_csv(t));
    written.push_back(p.string());
  }
  Table prov{{"key", "value"}, {}};
  prov.rows.push_back({std::string("scenario"), report.scenario});
  prov.rows.push_back({std::string("config_hash"), report.provenance.config_hash});
  prov.rows.push_back({std::string("tool_version"), report.provenance.tool_version});
  prov.rows.push_back({std::string("seed"), std::to_string(report.provenance.seed)});
  for (const auto& [k, v] : report.errors) prov.rows.push_back({"error." + k, v});
  const fs::path p = sub / "provenance.csv";
  write_file(p, table_to_csv(prov));
  written.push_back(p.string());
  return written;
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace qecqm
