#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "multispec/rational.hpp"

namespace multispec {

class OutputError : public std::runtime_error {
 public:
  explicit OutputError(const std::string& message) : std::runtime_error(message) {}
};

/// Everything needed to regenerate an output: with the spec file it fixes
/// every number in the result.
struct RunManifest {
  std::string subcommand;
  nlohmann::json spec;                 // resolved spec, rationals as "num/den"
  nlohmann::json flags = nlohmann::json::object();
  std::optional<std::uint64_t> seed;
  std::string version = MULTISPEC_VERSION;
  std::string timestamp;

  nlohmann::json to_json() const;
};

/// UTC ISO-8601. Honors SOURCE_DATE_EPOCH so reruns can pin the stamp.
std::string manifest_timestamp();

using Cell = std::variant<long long, double, std::string>;

/// A header plus rows of cells; every output format is rendered from this.
class Table {
 public:
  explicit Table(std::vector<std::string> columns = {}) : columns_(std::move(columns)) {}

  const std::vector<std::string>& columns() const { return columns_; }
  const std::vector<std::vector<Cell>>& rows() const { return rows_; }
  bool empty() const { return rows_.empty(); }

  /// Throws std::invalid_argument if the width does not match the header.
  void add_row(std::vector<Cell> row);

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<Cell>> rows_;
};

/// The two cells a rational occupies: "num/den" and its 12-digit decimal.
std::vector<Cell> rational_cells(const Rational& q);

/// "%.17g" for finite values, "nan"/"inf"/"-inf" otherwise.
std::string format_real(double x);

/// RFC 4180: header row, CRLF-free "\n" line ends, quoting only when needed.
std::string to_csv(const Table& table);

/// {"manifest": ..., "rows": [{column: value, ...}, ...]}. Non-finite reals
/// become null.
nlohmann::json to_json(const Table& table, const RunManifest& manifest);

enum class OutputFormat { Csv, Json };

/// Writes the table to `path`, or to `stdout_stream` when no path is given.
/// CSV written to a file gets a `<path>.manifest.json` sidecar. Throws
/// OutputError if the destination cannot be written.
void emit(const Table& table, const RunManifest& manifest, OutputFormat format,
          const std::optional<std::filesystem::path>& path, std::ostream& stdout_stream);

}  // namespace multispec
