#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "json.hpp"
#include "ses/opensys.hpp"
#include "ses/states.hpp"

namespace ses::io {

using Json = nlohmann::json;

// {"label", "bounded", "levels": [{"energy", "degeneracy"}...]} plus, for
// truncated spectra, "tail_bound" and "max_temperature".
Json spectrum_to_json(const Spectrum& spectrum);
Spectrum spectrum_from_json(const Json& j);

// {"spectrum": <inline spectrum object | path relative to base_dir>, "probs": [...]}
LevelDistribution state_from_json(const Json& j, const std::filesystem::path& base_dir);
Json state_to_json(const LevelDistribution& state);

// {"volume", "scaling": "box"|"none", "box": {"b_min","b_max","mu_max"},
//  and either "sectors": [spectrum...] (z = 1, 2, ...) or
//  "single": spectrum, "counting": "distinguishable"|"boltzmann"}
GrandModel grand_model_from_json(const Json& j, const std::filesystem::path& base_dir);

Json read_json_file(const std::filesystem::path& path);

// Numbers with 12 significant digits; "inf", "-inf", "nan" for non-finite.
std::string format_number(double x);
std::string format_bool(bool b);

// Small CSV table kept as strings, printed with a header row.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void add(std::vector<std::string> row) { rows.push_back(std::move(row)); }
  std::string csv() const;
  Json json() const;
};

// Rows of numbers from a CSV file; a first row that does not parse is a header.
std::vector<std::vector<double>> read_numeric_csv(const std::filesystem::path& path);

}  // namespace ses::io
