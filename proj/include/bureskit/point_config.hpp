#pragma once

#include <cmath>
#include <fstream>
#include <numbers>
#include <optional>
#include <regex>
#include <string>

#include <nlohmann/json.hpp>

#include "bureskit/errors.hpp"
#include "bureskit/state_param.hpp"

namespace bureskit {

/// Parses "0.5", "-pi/3", "2pi/3", "3*pi/4", "pi" into radians.
inline double parse_angle(const std::string& text) {
  static const std::regex pi_form(R"(^\s*([+-])?\s*(\d+(?:\.\d*)?)?\s*\*?\s*pi\s*(?:/\s*(\d+(?:\.\d*)?))?\s*$)",
                                  std::regex::icase);
  std::smatch m;
  if (std::regex_match(text, m, pi_form)) {
    double v = std::numbers::pi;
    if (m[2].matched) v *= std::stod(m[2].str());
    if (m[3].matched) {
      const double d = std::stod(m[3].str());
      if (d == 0.0) throw Error(ErrorKind::invalid_argument, "zero denominator in angle '" + text + "'");
      v /= d;
    }
    return (m[1].matched && m[1].str() == "-") ? -v : v;
  }
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw Error(ErrorKind::invalid_argument, "cannot parse angle '" + text + "'");
  }
  while (used < text.size() && std::isspace(static_cast<unsigned char>(text[used]))) ++used;
  if (used != text.size() || !std::isfinite(v)) throw Error(ErrorKind::invalid_argument, "cannot parse angle '" + text + "'");
  return v;
}

/// Point from a JSON object with exactly the eight coordinate keys; values
/// are numbers or angle strings.
inline PointCoords point_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw Error(ErrorKind::invalid_argument, "point config must be a JSON object");
  PointCoords p;
  bool seen[kNumCoords] = {};
  for (const auto& [key, value] : j.items()) {
    const auto c = coord_from_name(key);
    if (!c) throw Error(ErrorKind::invalid_argument, "unknown key '" + key + "' in point config");
    double v = 0.0;
    if (value.is_number()) v = value.get<double>();
    else if (value.is_string()) v = parse_angle(value.get<std::string>());
    else throw Error(ErrorKind::invalid_argument, "value of '" + key + "' must be a number or angle string");
    p[*c] = v;
    seen[static_cast<int>(*c)] = true;
  }
  for (int i = 0; i < kNumCoords; ++i) {
    if (!seen[i]) throw Error(ErrorKind::invalid_argument, "missing key '" + std::string(kCoordNames[static_cast<std::size_t>(i)]) + "'");
  }
  return p;
}

inline PointCoords point_from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::invalid_argument, "cannot open point file " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::invalid_argument, std::string("malformed point file: ") + e.what());
  }
  return point_from_json(j);
}

inline nlohmann::ordered_json point_to_json(const PointCoords& p) {
  nlohmann::ordered_json j;
  for (int i = 0; i < kNumCoords; ++i) j[std::string(kCoordNames[static_cast<std::size_t>(i)])] = p[i];
  return j;
}

inline bool same_point(const PointCoords& x, const PointCoords& y, double tol = 1e-12) {
  for (int i = 0; i < kNumCoords; ++i) {
    if (std::abs(x[i] - y[i]) > tol) return false;
  }
  return true;
}

}  // namespace bureskit
