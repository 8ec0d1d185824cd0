#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "multispec/ensemble.hpp"

namespace multispec {

/// Reads `kappa`, `alpha`, `gamma`, `p`, `even_moments`. Rationals may be
/// "a/b" strings, decimal strings, or JSON numbers (taken by their shortest
/// decimal spelling, so 0.1 means 1/10). The result is validated.
EnsembleSpec spec_from_json(const nlohmann::json& doc);

/// Inverse of spec_from_json with every rational written as "num/den".
nlohmann::json spec_to_json(const EnsembleSpec& spec);

/// Throws SpecError(Malformed) for unreadable files or bad JSON syntax.
EnsembleSpec load_spec_file(const std::filesystem::path& path);

Rational rational_from_json(const nlohmann::json& value);

}  // namespace multispec
