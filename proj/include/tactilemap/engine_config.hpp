#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "json.hpp"

#include "tactilemap/gesture_recognizer.hpp"
#include "tactilemap/interaction_controller.hpp"
#include "tactilemap/map_model.hpp"

namespace tactilemap {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Everything a session needs besides the map.
struct EngineConfig {
  GestureConfig gesture;
  ControllerConfig controller;
  ValidationRules validation;
  double index_cell_mm = 10.0;
};

/// Reads a flat JSON object. Keys are the GestureConfig field names,
/// hit_tolerance_mm, distance_pair_timeout_ms, the ValidationRules field
/// names and index_cell_mm. Missing keys keep their defaults; unknown keys
/// are rejected.
inline EngineConfig engine_config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  EngineConfig c;
  for (const auto& [key, value] : j.items()) {
    auto real = [&](double& out) {
      if (!value.is_number()) throw ConfigError("'" + key + "' must be a number");
      out = value.get<double>();
    };
    auto integer = [&](std::int64_t& out) {
      if (!value.is_number_integer()) throw ConfigError("'" + key + "' must be an integer");
      out = value.get<std::int64_t>();
    };
    if (key == "double_tap_max_interval_ms") integer(c.gesture.double_tap_max_interval_ms);
    else if (key == "tap_max_duration_ms") integer(c.gesture.tap_max_duration_ms);
    else if (key == "tap_max_drift_mm") real(c.gesture.tap_max_drift_mm);
    else if (key == "double_tap_max_gap_mm") real(c.gesture.double_tap_max_gap_mm);
    else if (key == "hold_min_duration_ms") integer(c.gesture.hold_min_duration_ms);
    else if (key == "hold_max_drift_mm") real(c.gesture.hold_max_drift_mm);
    else if (key == "lasso_closure_eps_mm") real(c.gesture.lasso_closure_eps_mm);
    else if (key == "lasso_min_perimeter_mm") real(c.gesture.lasso_min_perimeter_mm);
    else if (key == "hit_tolerance_mm") real(c.controller.hit_tolerance_mm);
    else if (key == "distance_pair_timeout_ms") integer(c.controller.distance_pair_timeout_ms);
    else if (key == "min_line_separation_mm") real(c.validation.min_line_separation_mm);
    else if (key == "min_symbol_clearance_mm") real(c.validation.min_symbol_clearance_mm);
    else if (key == "min_street_width_mm") real(c.validation.min_street_width_mm);
    else if (key == "index_cell_mm") real(c.index_cell_mm);
    else throw ConfigError("unknown config key '" + key + "'");
  }
  try {
    validate(c.gesture);
  } catch (const GestureError& e) {
    throw ConfigError(e.what());
  }
  if (!(c.controller.hit_tolerance_mm >= 0.0)) throw ConfigError("hit_tolerance_mm must be non-negative");
  if (c.controller.distance_pair_timeout_ms <= 0) throw ConfigError("distance_pair_timeout_ms must be positive");
  if (!(c.index_cell_mm > 0.0)) throw ConfigError("index_cell_mm must be positive");
  return c;
}

inline nlohmann::json to_json(const EngineConfig& c) {
  return {
      {"double_tap_max_interval_ms", c.gesture.double_tap_max_interval_ms},
      {"tap_max_duration_ms", c.gesture.tap_max_duration_ms},
      {"tap_max_drift_mm", c.gesture.tap_max_drift_mm},
      {"double_tap_max_gap_mm", c.gesture.double_tap_max_gap_mm},
      {"hold_min_duration_ms", c.gesture.hold_min_duration_ms},
      {"hold_max_drift_mm", c.gesture.hold_max_drift_mm},
      {"lasso_closure_eps_mm", c.gesture.lasso_closure_eps_mm},
      {"lasso_min_perimeter_mm", c.gesture.lasso_min_perimeter_mm},
      {"hit_tolerance_mm", c.controller.hit_tolerance_mm},
      {"distance_pair_timeout_ms", c.controller.distance_pair_timeout_ms},
      {"min_line_separation_mm", c.validation.min_line_separation_mm},
      {"min_symbol_clearance_mm", c.validation.min_symbol_clearance_mm},
      {"min_street_width_mm", c.validation.min_street_width_mm},
      {"index_cell_mm", c.index_cell_mm},
  };
}

inline EngineConfig load_engine_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config '" + path.string() + "': " + e.what());
  }
  return engine_config_from_json(j);
}

}  // namespace tactilemap
