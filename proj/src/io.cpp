#include "ses/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "ses/error.hpp"

namespace ses::io {

namespace {

double number(const Json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number())
    fail(ErrorCode::ParseError, std::string("missing numeric field '") + key + "'");
  return j.at(key).get<double>();
}

}  // namespace

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::ParseError, "cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    fail(ErrorCode::ParseError, path.string() + ": " + e.what());
  }
}

Json spectrum_to_json(const Spectrum& spectrum) {
  Json levels = Json::array();
  for (const auto& l : spectrum.levels()) levels.push_back({{"energy", l.energy}, {"degeneracy", l.degeneracy}});
  Json j{{"label", spectrum.label()}, {"bounded", spectrum.bounded()}, {"levels", levels}};
  if (!spectrum.bounded()) {
    j["tail_bound"] = spectrum.tail_bound();
    j["max_temperature"] = 1.0 / spectrum.min_beta();
  }
  return j;
}

Spectrum spectrum_from_json(const Json& j) {
  if (!j.is_object()) fail(ErrorCode::ParseError, "spectrum must be a JSON object");
  if (!j.contains("levels") || !j.at("levels").is_array())
    fail(ErrorCode::ParseError, "spectrum needs a 'levels' array");
  std::vector<Level> levels;
  for (const auto& l : j.at("levels")) {
    if (l.is_array() && l.size() == 2) {
      levels.push_back({l[0].get<double>(), l[1].get<double>()});
    } else {
      levels.push_back({number(l, "energy"), l.contains("degeneracy") ? number(l, "degeneracy") : 1.0});
    }
  }
  const std::string label = j.value("label", std::string("spectrum"));
  const bool bounded = j.value("bounded", true);
  if (bounded) return Spectrum(std::move(levels), true, 0.0, -kInfinity, label);
  if (!j.contains("max_temperature"))
    fail(ErrorCode::ParseError, "truncated spectrum needs 'max_temperature'");
  return Spectrum(std::move(levels), false, j.value("tail_bound", 0.0), 1.0 / number(j, "max_temperature"),
                  label);
}

namespace {

std::shared_ptr<const Spectrum> spectrum_ref(const Json& j, const std::filesystem::path& base_dir) {
  if (j.is_string()) {
    const std::filesystem::path p = base_dir / j.get<std::string>();
    return std::make_shared<Spectrum>(spectrum_from_json(read_json_file(p)));
  }
  return std::make_shared<Spectrum>(spectrum_from_json(j));
}

}  // namespace

LevelDistribution state_from_json(const Json& j, const std::filesystem::path& base_dir) {
  if (!j.is_object() || !j.contains("spectrum") || !j.contains("probs"))
    fail(ErrorCode::ParseError, "state needs 'spectrum' and 'probs'");
  std::vector<double> probs;
  for (const auto& p : j.at("probs")) {
    if (!p.is_number()) fail(ErrorCode::ParseError, "probabilities must be numbers");
    probs.push_back(p.get<double>());
  }
  return make_state(spectrum_ref(j.at("spectrum"), base_dir), std::move(probs));
}

Json state_to_json(const LevelDistribution& state) {
  return {{"spectrum", spectrum_to_json(*state.spectrum)}, {"probs", state.probs}};
}

GrandModel grand_model_from_json(const Json& j, const std::filesystem::path& base_dir) {
  if (!j.is_object()) fail(ErrorCode::ParseError, "grand model must be a JSON object");
  const double volume = j.value("volume", 1.0);
  const std::string scaling_name = j.value("scaling", std::string("none"));
  VolumeScaling scaling;
  if (scaling_name == "box") scaling = VolumeScaling::box;
  else if (scaling_name == "none") scaling = VolumeScaling::none;
  else fail(ErrorCode::ParseError, "unknown volume scaling '" + scaling_name + "'");
  if (!j.contains("box")) fail(ErrorCode::ParseError, "grand model needs an operating 'box'");
  const Json& b = j.at("box");
  const OperatingBox box{number(b, "b_min"), number(b, "b_max"), number(b, "mu_max")};

  if (j.contains("sectors")) {
    std::vector<std::shared_ptr<const CanonicalModel>> sectors;
    for (const auto& s : j.at("sectors")) sectors.push_back(spectrum_ref(s, base_dir));
    return GrandModel::from_sectors(std::move(sectors), volume, scaling, box);
  }
  if (!j.contains("single")) fail(ErrorCode::ParseError, "grand model needs 'sectors' or 'single'");
  const std::string counting_name = j.value("counting", std::string("distinguishable"));
  Counting counting;
  if (counting_name == "distinguishable") counting = Counting::distinguishable;
  else if (counting_name == "boltzmann") counting = Counting::boltzmann;
  else fail(ErrorCode::ParseError, "unknown counting '" + counting_name + "'");
  return GrandModel::independent(spectrum_ref(j.at("single"), base_dir), counting, volume, scaling, box);
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0.0) return "0";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string format_bool(bool b) { return b ? "true" : "false"; }

std::string Table::csv() const {
  std::ostringstream out;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
    out << '\n';
  };
  line(columns);
  for (const auto& r : rows) line(r);
  return out.str();
}

Json Table::json() const {
  Json rows_json = Json::array();
  for (const auto& r : rows) {
    Json obj = Json::object();
    for (std::size_t i = 0; i < columns.size() && i < r.size(); ++i) {
      const std::string& cell = r[i];
      if (cell == "true" || cell == "false") {
        obj[columns[i]] = cell == "true";
      } else {
        char* end = nullptr;
        const double v = std::strtod(cell.c_str(), &end);
        if (end && *end == '\0' && !cell.empty() && std::isfinite(v)) obj[columns[i]] = v;
        else obj[columns[i]] = cell;
      }
    }
    rows_json.push_back(obj);
  }
  return {{"columns", columns}, {"rows", rows_json}};
}

std::vector<std::vector<double>> read_numeric_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::ParseError, "cannot open " + path.string());
  std::vector<std::vector<double>> rows;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    bool ok = true;
    while (std::getline(ss, cell, ',')) {
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      while (end && (*end == ' ' || *end == '\r' || *end == '\t')) ++end;
      if (cell.empty() || !end || *end != '\0') {
        ok = false;
        break;
      }
      row.push_back(v);
    }
    if (!ok) {
      if (first) {
        first = false;
        continue;
      }
      fail(ErrorCode::ParseError, path.string() + ": non-numeric row '" + line + "'");
    }
    first = false;
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace ses::io
