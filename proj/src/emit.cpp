#include "multispec/emit.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>

namespace multispec {

using nlohmann::json;

json RunManifest::to_json() const {
  json doc;
  doc["subcommand"] = subcommand;
  doc["spec"] = spec;
  doc["flags"] = flags;
  doc["seed"] = seed ? json(*seed) : json(nullptr);
  doc["version"] = version;
  doc["timestamp"] = timestamp;
  return doc;
}

std::string manifest_timestamp() {
  std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH"); epoch != nullptr && *epoch != '\0') {
    now = static_cast<std::time_t>(std::strtoll(epoch, nullptr, 10));
  }
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &utc);
  return buf;
}

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != columns_.size()) {
    throw std::invalid_argument("row has " + std::to_string(row.size()) + " cells, header has " +
                                std::to_string(columns_.size()));
  }
  rows_.push_back(std::move(row));
}

std::vector<Cell> rational_cells(const Rational& q) {
  return {to_fraction_string(q), to_decimal_string(q)};
}

std::string format_real(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

std::string render(const Cell& cell) {
  if (const auto* i = std::get_if<long long>(&cell)) return std::to_string(*i);
  if (const auto* d = std::get_if<double>(&cell)) return format_real(*d);
  return std::get<std::string>(cell);
}

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\r\n") == std::string::npos) return text;
  std::string quoted = "\"";
  for (char c : text) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

json json_value(const Cell& cell) {
  if (const auto* i = std::get_if<long long>(&cell)) return *i;
  if (const auto* d = std::get_if<double>(&cell)) return std::isfinite(*d) ? json(*d) : json(nullptr);
  return std::get<std::string>(cell);
}

}  // namespace

std::string to_csv(const Table& table) {
  std::string out;
  auto line = [&out](const auto& cells, auto&& text_of) {
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (c) out += ',';
      out += csv_field(text_of(cells[c]));
    }
    out += '\n';
  };
  line(table.columns(), [](const std::string& s) { return s; });
  for (const auto& row : table.rows()) line(row, render);
  return out;
}

json to_json(const Table& table, const RunManifest& manifest) {
  json rows = json::array();
  for (const auto& row : table.rows()) {
    json obj = json::object();
    for (std::size_t c = 0; c < row.size(); ++c) obj[table.columns()[c]] = json_value(row[c]);
    rows.push_back(std::move(obj));
  }
  json doc;
  doc["manifest"] = manifest.to_json();
  doc["rows"] = std::move(rows);
  return doc;
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw OutputError("cannot write '" + path.string() + "'");
  file << content;
  file.flush();
  if (!file) throw OutputError("failed while writing '" + path.string() + "'");
}

}  // namespace

void emit(const Table& table, const RunManifest& manifest, OutputFormat format,
          const std::optional<std::filesystem::path>& path, std::ostream& stdout_stream) {
  const std::string body =
      format == OutputFormat::Csv ? to_csv(table) : to_json(table, manifest).dump(2) + "\n";
  if (!path) {
    stdout_stream << body;
    return;
  }
  write_file(*path, body);
  if (format == OutputFormat::Csv) {
    write_file(path->string() + ".manifest.json", manifest.to_json().dump(2) + "\n");
  }
}

}  // namespace multispec
