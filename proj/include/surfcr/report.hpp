#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <tuple>

#include <nlohmann/json.hpp>

#include "surfcr/analysis.hpp"
#include "surfcr/errors.hpp"

namespace surfcr {

namespace detail {

inline std::string format_number(const char* fmt, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

inline std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

inline double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size()) throw ConfigError("");
    return d;
  } catch (const std::exception&) {
    throw ConfigError("invalid number for '" + key + "': " + v);
  }
}

inline int parse_int(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const int i = std::stoi(v, &used);
    if (used != v.size()) throw ConfigError("");
    return i;
  } catch (const std::exception&) {
    throw ConfigError("invalid integer for '" + key + "': " + v);
  }
}

}  // namespace detail

/// Parses "a..b" (or a single level "a").
inline std::pair<int, int> parse_level_range(const std::string& text) {
  const auto dots = text.find("..");
  if (dots == std::string::npos) {
    const int l = detail::parse_int("levels", detail::trim(text));
    return {l, l};
  }
  return {detail::parse_int("levels", detail::trim(text.substr(0, dots))),
          detail::parse_int("levels", detail::trim(text.substr(dots + 2)))};
}

/// Applies one key=value setting.
inline void apply_setting(StudyConfig& c, const std::string& key, const std::string& value) {
  if (key == "surface") {
    c.surface = value;
  } else if (key == "solution") {
    c.solution = value;
  } else if (key == "mass_coefficient" || key == "mass_coeff") {
    c.mass_coefficient = detail::parse_double(key, value);
  } else if (key == "levels") {
    std::tie(c.level_min, c.level_max) = parse_level_range(value);
  } else if (key == "level_min") {
    c.level_min = detail::parse_int(key, value);
  } else if (key == "level_max") {
    c.level_max = detail::parse_int(key, value);
  } else if (key == "quad_degree") {
    c.quad_degree = detail::parse_int(key, value);
  } else if (key == "load_quad_degree") {
    c.load_quad_degree = detail::parse_int(key, value);
  } else if (key == "cg_tol" || key == "cg_tolerance") {
    c.cg_tolerance = detail::parse_double(key, value);
  } else if (key == "out") {
    c.out = value;
  } else if (key == "format") {
    c.format = value;
  } else if (key == "export_mesh") {
    c.export_mesh = value;
  } else if (key == "dump_matrix") {
    c.dump_matrix = value;
  } else if (key == "import_mesh") {
    c.import_mesh = value;
  } else {
    throw ConfigError("unknown configuration key '" + key + "'");
  }
}

/// Flat key=value lines; '#' starts a comment.
inline StudyConfig parse_config(std::istream& is, StudyConfig base = {}) {
  std::string line;
  int number = 0;
  while (std::getline(is, line)) {
    ++number;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(number) + ": expected key=value");
    apply_setting(base, detail::trim(line.substr(0, eq)), detail::trim(line.substr(eq + 1)));
  }
  return base;
}

inline StudyConfig parse_config(const std::filesystem::path& path, StudyConfig base = {}) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open config " + path.string());
  return parse_config(is, std::move(base));
}

/// h and errors with 6 significant digits, orders with 6 decimals, blank on the first row.
inline void write_csv(const ErrorReport& report, std::ostream& os) {
  const auto l2 = report.l2_orders();
  const auto h1 = report.h1_orders();
  auto order = [](const std::optional<double>& o) { return o ? detail::format_number("%.6f", *o) : std::string{}; };
  os << "h,l2_error,l2_order,h1_error,h1_order\n";
  for (std::size_t k = 0; k < report.levels.size(); ++k) {
    const auto& r = report.levels[k];
    os << detail::format_number("%.6g", r.h) << ',' << detail::format_number("%.6g", r.errors.l2_projected) << ','
       << order(l2[k]) << ',' << detail::format_number("%.6g", r.errors.energy) << ',' << order(h1[k]) << '\n';
  }
}

inline nlohmann::json config_to_json(const StudyConfig& c) {
  return {{"surface", c.surface},
          {"solution", c.resolved_solution()},
          {"mass_coefficient", c.mass_coefficient},
          {"level_min", c.level_min},
          {"level_max", c.level_max},
          {"quad_degree", c.quad_degree},
          {"load_quad_degree", c.load_quad_degree},
          {"cg_tolerance", c.cg_tolerance},
          {"import_mesh", c.import_mesh}};
}

inline nlohmann::json report_to_json(const ErrorReport& report) {
  const auto l2 = report.l2_orders();
  const auto h1 = report.h1_orders();
  auto order = [](const std::optional<double>& o) { return o ? nlohmann::json(*o) : nlohmann::json(nullptr); };
  nlohmann::json levels = nlohmann::json::array();
  double total = 0.0;
  for (std::size_t k = 0; k < report.levels.size(); ++k) {
    const auto& r = report.levels[k];
    total += r.seconds;
    levels.push_back({{"level", r.level},
                      {"h", r.h},
                      {"dofs", r.dofs},
                      {"l2_error", r.errors.l2_projected},
                      {"l2_order", order(l2[k])},
                      {"h1_error", r.errors.energy},
                      {"h1_order", order(h1[k])},
                      {"h1_seminorm", r.errors.h1_seminorm},
                      {"l2_full", r.errors.l2},
                      {"cg_iterations", r.cg_iterations},
                      {"cg_residual", r.cg_residual},
                      {"seconds", r.seconds}});
  }
  return {{"config", config_to_json(report.config)}, {"levels", levels}, {"total_seconds", total}};
}

inline void write_json(const ErrorReport& report, std::ostream& os) { os << report_to_json(report).dump(2) << '\n'; }

inline void emit_report(const ErrorReport& report, const std::string& format, std::ostream& os) {
  if (format == "csv") {
    write_csv(report, os);
  } else if (format == "json") {
    write_json(report, os);
  } else {
    throw ConfigError("unknown report format '" + format + "'");
  }
  if (!os) throw IoError("failed writing report");
}

inline void emit_report(const ErrorReport& report, const std::string& format, const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  emit_report(report, format, os);
}

}  // namespace surfcr
