#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

namespace qecqm {

using Cell = std::variant<std::monostate, bool, std::int64_t, double, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

struct Provenance {
  std::string config_hash;  // FNV-1a 64 of the canonical config, hex
  std::string tool_version;
  std::uint64_t seed = 0;
};

/// Every requested output appears either under `tables` (same name, possibly
/// with companion tables "<name>_...") or under `errors`.
struct RunReport {
  std::string scenario;
  Provenance provenance;
  std::vector<std::string> requested;
  std::map<std::string, Table> tables;
  std::map<std::string, std::string> errors;
};

enum class ReportFormat { csv, json };

/// Shortest decimal that round-trips; "nan", "inf", "-inf" for non-finite values.
std::string format_double(double v);
/// RFC 4180 field quoting.
std::string csv_field(const std::string& s);
std::string table_to_csv(const Table& table);
/// UTF-8, keys sorted, tables as arrays of rows, non-finite numbers as null.
std::string report_to_json(const RunReport& report);

/// csv: DIR/<scenario>/<table>.csv plus DIR/<scenario>/provenance.csv;
/// json: DIR/<scenario>.json. Returns the paths written. Throws IoError.
std::vector<std::string> emit_report(const RunReport& report, const std::string& dir, ReportFormat format);

std::uint64_t fnv1a64(const std::string& bytes);

}  // namespace qecqm
