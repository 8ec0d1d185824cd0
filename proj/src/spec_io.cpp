#include "multispec/spec_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace multispec {

using nlohmann::json;

Rational rational_from_json(const json& value) {
  try {
    if (value.is_string()) return parse_rational(value.get<std::string>());
    if (value.is_number_integer()) {
      return Rational(BigInt(std::to_string(value.get<long long>()), 10));
    }
    if (value.is_number_unsigned()) {
      return Rational(BigInt(std::to_string(value.get<unsigned long long>()), 10));
    }
    if (value.is_number_float()) {
      char buf[64];
      auto res = std::to_chars(buf, buf + sizeof buf, value.get<double>());
      return parse_rational(std::string_view(buf, static_cast<std::size_t>(res.ptr - buf)));
    }
  } catch (const std::invalid_argument& e) {
    throw SpecError(SpecErrorKind::Malformed, e.what());
  }
  throw SpecError(SpecErrorKind::Malformed, "expected a rational, got " + value.dump());
}

EnsembleSpec spec_from_json(const json& doc) {
  if (!doc.is_object()) throw SpecError(SpecErrorKind::Malformed, "spec must be a JSON object");
  for (const char* key : {"kappa", "alpha", "gamma", "p", "even_moments"}) {
    if (!doc.contains(key)) {
      throw SpecError(SpecErrorKind::Malformed, std::string("missing key '") + key + "'");
    }
  }
  EnsembleSpec spec;
  if (!doc["kappa"].is_number_integer()) {
    throw SpecError(SpecErrorKind::Malformed, "'kappa' must be an integer");
  }
  spec.kappa = doc["kappa"].get<int>();

  const auto& alpha = doc["alpha"];
  if (!alpha.is_array()) throw SpecError(SpecErrorKind::Malformed, "'alpha' must be an array");
  for (const auto& a : alpha) spec.alpha.push_back(rational_from_json(a));

  const auto& gamma = doc["gamma"];
  if (!gamma.is_array()) throw SpecError(SpecErrorKind::Malformed, "'gamma' must be an array of arrays");
  for (const auto& row : gamma) {
    if (!row.is_array()) throw SpecError(SpecErrorKind::Malformed, "'gamma' rows must be arrays");
    std::vector<bool> r;
    for (const auto& cell : row) {
      if (cell.is_boolean()) {
        r.push_back(cell.get<bool>());
      } else if (cell.is_number_integer() && (cell.get<int>() == 0 || cell.get<int>() == 1)) {
        r.push_back(cell.get<int>() == 1);
      } else {
        throw SpecError(SpecErrorKind::Malformed, "'gamma' entries must be 0 or 1, got " + cell.dump());
      }
    }
    spec.gamma.push_back(std::move(r));
  }

  spec.p = rational_from_json(doc["p"]);

  const auto& moments = doc["even_moments"];
  if (!moments.is_array()) throw SpecError(SpecErrorKind::Malformed, "'even_moments' must be an array");
  for (const auto& x : moments) spec.even_moments.push_back(rational_from_json(x));

  return validate_spec(std::move(spec));
}

json spec_to_json(const EnsembleSpec& spec) {
  json doc;
  doc["kappa"] = spec.kappa;
  doc["alpha"] = json::array();
  for (const auto& a : spec.alpha) doc["alpha"].push_back(to_fraction_string(a));
  doc["gamma"] = json::array();
  for (const auto& row : spec.gamma) {
    json r = json::array();
    for (bool cell : row) r.push_back(cell ? 1 : 0);
    doc["gamma"].push_back(r);
  }
  doc["p"] = to_fraction_string(spec.p);
  doc["even_moments"] = json::array();
  for (const auto& x : spec.even_moments) doc["even_moments"].push_back(to_fraction_string(x));
  return doc;
}

EnsembleSpec load_spec_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SpecError(SpecErrorKind::Malformed, "cannot open spec file '" + path.string() + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw SpecError(SpecErrorKind::Malformed, "'" + path.string() + "': " + e.what());
  }
  return spec_from_json(doc);
}

}  // namespace multispec
