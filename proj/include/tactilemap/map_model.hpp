#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "tactilemap/geometry.hpp"

namespace tactilemap {

enum class ElementKind { street, building, poi, water };

inline std::string_view to_string(ElementKind kind) {
  switch (kind) {
    case ElementKind::street: return "street";
    case ElementKind::building: return "building";
    case ElementKind::poi: return "poi";
    case ElementKind::water: return "water";
  }
  return "?";
}

inline std::optional<ElementKind> parse_element_kind(std::string_view s) {
  if (s == "street") return ElementKind::street;
  if (s == "building") return ElementKind::building;
  if (s == "poi") return ElementKind::poi;
  if (s == "water") return ElementKind::water;
  return std::nullopt;
}

inline bool is_area_kind(ElementKind k) { return k == ElementKind::building || k == ElementKind::water; }

struct InfoLayer {
  int level = 1;
  std::string text;

  friend bool operator==(const InfoLayer&, const InfoLayer&) = default;
};

/// One named feature of the map.
///
/// `geometry` is interpreted by kind: a single point for a poi, an open
/// polyline for a street, and a ring without a repeated closing vertex for
/// buildings and water.
struct MapElement {
  std::string id;
  ElementKind kind = ElementKind::poi;
  std::vector<Point> geometry;
  std::string name;
  std::vector<InfoLayer> levels;
  /// Drawn line width for streets, when the source carries one.
  std::optional<double> line_width_mm;
};

struct MapDocument {
  static constexpr double kDefaultWidthMm = 420.0;
  static constexpr double kDefaultHeightMm = 297.0;

  double canvas_width_mm = kDefaultWidthMm;
  double canvas_height_mm = kDefaultHeightMm;
  double scale_m_per_mm = 1.0;
  std::vector<MapElement> elements;
  std::string title;

  const MapElement* find(std::string_view id) const {
    for (const auto& e : elements)
      if (e.id == id) return &e;
    return nullptr;
  }
};

enum class MapErrc {
  malformed_document,
  unknown_kind,
  duplicate_id,
  open_polygon,
  missing_scale,
  out_of_canvas,
  invalid_geometry,
  invalid_element,
  unknown_element,
};

inline std::string_view to_string(MapErrc c) {
  switch (c) {
    case MapErrc::malformed_document: return "MalformedDocument";
    case MapErrc::unknown_kind: return "UnknownKind";
    case MapErrc::duplicate_id: return "DuplicateId";
    case MapErrc::open_polygon: return "OpenPolygon";
    case MapErrc::missing_scale: return "MissingScale";
    case MapErrc::out_of_canvas: return "OutOfCanvas";
    case MapErrc::invalid_geometry: return "InvalidGeometry";
    case MapErrc::invalid_element: return "InvalidElement";
    case MapErrc::unknown_element: return "UnknownElement";
  }
  return "?";
}

class MapError : public std::runtime_error {
 public:
  MapError(MapErrc code, const std::string& message, std::optional<std::string> element_id = {})
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code),
        element_id_(std::move(element_id)) {}

  MapErrc code() const noexcept { return code_; }
  const std::optional<std::string>& element_id() const noexcept { return element_id_; }

 private:
  MapErrc code_;
  std::optional<std::string> element_id_;
};

/// Field-level equality with coordinates compared to `tol_mm`.
inline bool equivalent(const MapElement& a, const MapElement& b, double tol_mm = 1e-6) {
  if (a.id != b.id || a.kind != b.kind || a.name != b.name || a.levels != b.levels) return false;
  if (a.line_width_mm.has_value() != b.line_width_mm.has_value()) return false;
  if (a.line_width_mm && std::abs(*a.line_width_mm - *b.line_width_mm) > tol_mm) return false;
  if (a.geometry.size() != b.geometry.size()) return false;
  for (std::size_t i = 0; i < a.geometry.size(); ++i)
    if (distance(a.geometry[i], b.geometry[i]) > tol_mm) return false;
  return true;
}

inline bool equivalent(const MapDocument& a, const MapDocument& b, double tol_mm = 1e-6) {
  if (a.title != b.title || a.elements.size() != b.elements.size()) return false;
  if (std::abs(a.canvas_width_mm - b.canvas_width_mm) > tol_mm ||
      std::abs(a.canvas_height_mm - b.canvas_height_mm) > tol_mm)
    return false;
  if (std::abs(a.scale_m_per_mm - b.scale_m_per_mm) > 1e-12 * std::max(1.0, a.scale_m_per_mm))
    return false;
  for (std::size_t i = 0; i < a.elements.size(); ++i)
    if (!equivalent(a.elements[i], b.elements[i], tol_mm)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Element info levels

inline constexpr std::string_view kNoFurtherInformation = "no further information";

/// Level 0 is the name; level k is the k-th info layer. Missing levels fall
/// back to "<name>: no further information".
inline std::string element_info(const MapDocument& doc, std::string_view id, int level) {
  const MapElement* e = doc.find(id);
  if (!e) throw MapError(MapErrc::unknown_element, "no element with id '" + std::string(id) + "'", std::string(id));
  if (level == 0) return e->name;
  for (const auto& layer : e->levels)
    if (layer.level == level) return layer.text;
  return e->name + ": " + std::string(kNoFurtherInformation);
}

// ---------------------------------------------------------------------------
// Structural checks shared by the parser and the validator

/// First violated structural invariant of a single element, if any.
inline std::optional<MapError> check_element(const MapElement& e, double width_mm, double height_mm) {
  if (e.id.empty()) return MapError(MapErrc::invalid_element, "element without id");
  if (e.name.empty()) return MapError(MapErrc::invalid_element, "element '" + e.id + "' has no name", e.id);
  int expected_level = 1;
  for (const auto& layer : e.levels) {
    if (layer.level < expected_level)
      return MapError(MapErrc::invalid_element, "info levels of '" + e.id + "' are not strictly increasing from 1", e.id);
    if (layer.text.empty())
      return MapError(MapErrc::invalid_element, "empty info level on '" + e.id + "'", e.id);
    expected_level = layer.level + 1;
  }
  if (!e.levels.empty() && e.levels.front().level != 1)
    return MapError(MapErrc::invalid_element, "info levels of '" + e.id + "' must start at 1", e.id);

  const auto& g = e.geometry;
  switch (e.kind) {
    case ElementKind::poi:
      if (g.size() != 1) return MapError(MapErrc::invalid_geometry, "poi '" + e.id + "' must be a single point", e.id);
      break;
    case ElementKind::street:
      if (g.size() < 2)
        return MapError(MapErrc::invalid_geometry, "street '" + e.id + "' needs at least 2 vertices", e.id);
      if (polyline_length(g) == 0.0)
        return MapError(MapErrc::invalid_geometry, "street '" + e.id + "' has zero length", e.id);
      break;
    case ElementKind::building:
    case ElementKind::water:
      if (g.size() < 3)
        return MapError(MapErrc::invalid_geometry, "polygon '" + e.id + "' needs at least 3 vertices", e.id);
      if (!ring_is_simple(g) || ring_area(g) == 0.0)
        return MapError(MapErrc::invalid_geometry, "polygon '" + e.id + "' is self-intersecting or degenerate", e.id);
      break;
  }
  for (const Point& p : g) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y) || p.x < 0.0 || p.y < 0.0 || p.x > width_mm || p.y > height_mm)
      return MapError(MapErrc::out_of_canvas, "element '" + e.id + "' leaves the canvas", e.id);
  }
  if (e.line_width_mm && !(*e.line_width_mm > 0.0))
    return MapError(MapErrc::invalid_geometry, "street '" + e.id + "' has a non-positive width", e.id);
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Tactile legibility validation

struct ValidationRules {
  double min_line_separation_mm = 3.0;
  double min_symbol_clearance_mm = 4.0;
  double min_street_width_mm = 1.0;
};

enum class Severity { error, warning };

struct ValidationIssue {
  Severity severity = Severity::warning;
  std::string code;
  std::optional<std::string> element_id;
  std::string message;

  friend bool operator==(const ValidationIssue&, const ValidationIssue&) = default;
};

inline bool has_errors(const std::vector<ValidationIssue>& issues) {
  return std::any_of(issues.begin(), issues.end(), [](const auto& i) { return i.severity == Severity::error; });
}

namespace detail {

inline std::string format_mm(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace detail

/// Structural errors first (document order), then the legibility warnings:
/// street width, line separation between streets that do not meet, and
/// clearance between poi symbols and every drawn line.
inline std::vector<ValidationIssue> validate_map(const MapDocument& doc, const ValidationRules& rules = {}) {
  std::vector<ValidationIssue> issues;
  auto error = [&](std::string code, std::optional<std::string> id, std::string msg) {
    issues.push_back({Severity::error, std::move(code), std::move(id), std::move(msg)});
  };
  auto warn = [&](std::string code, std::optional<std::string> id, std::string msg) {
    issues.push_back({Severity::warning, std::move(code), std::move(id), std::move(msg)});
  };

  if (!(doc.canvas_width_mm > 0.0) || !(doc.canvas_height_mm > 0.0))
    error("canvas", std::nullopt, "canvas dimensions must be positive");
  if (!(doc.scale_m_per_mm > 0.0)) error("scale", std::nullopt, "scale must be positive");

  std::set<std::string> seen;
  std::vector<bool> well_formed(doc.elements.size(), false);
  for (std::size_t i = 0; i < doc.elements.size(); ++i) {
    const auto& e = doc.elements[i];
    if (!e.id.empty() && !seen.insert(e.id).second) {
      error("duplicate-id", e.id, "id '" + e.id + "' is used more than once");
      continue;
    }
    if (auto err = check_element(e, doc.canvas_width_mm, doc.canvas_height_mm)) {
      error(std::string(to_string(err->code())), e.id.empty() ? std::nullopt : std::optional(e.id), err->what());
      continue;
    }
    well_formed[i] = true;
  }

  for (std::size_t i = 0; i < doc.elements.size(); ++i) {
    const auto& e = doc.elements[i];
    if (!well_formed[i] || e.kind != ElementKind::street || !e.line_width_mm) continue;
    if (*e.line_width_mm < rules.min_street_width_mm)
      warn("street-width", e.id,
           "street '" + e.id + "' is " + detail::format_mm(*e.line_width_mm) + " mm wide, below " +
               detail::format_mm(rules.min_street_width_mm) + " mm");
  }

  for (std::size_t i = 0; i < doc.elements.size(); ++i) {
    const auto& a = doc.elements[i];
    if (!well_formed[i] || a.kind != ElementKind::street) continue;
    for (std::size_t j = i + 1; j < doc.elements.size(); ++j) {
      const auto& b = doc.elements[j];
      if (!well_formed[j] || b.kind != ElementKind::street) continue;
      const double d = polyline_polyline_distance(a.geometry, b.geometry);
      if (d > 0.0 && d < rules.min_line_separation_mm)
        warn("line-separation", a.id,
             "streets '" + a.id + "' and '" + b.id + "' run " + detail::format_mm(d) + " mm apart");
    }
  }

  for (std::size_t i = 0; i < doc.elements.size(); ++i) {
    const auto& poi = doc.elements[i];
    if (!well_formed[i] || poi.kind != ElementKind::poi) continue;
    const Point p = poi.geometry.front();
    for (std::size_t j = 0; j < doc.elements.size(); ++j) {
      const auto& other = doc.elements[j];
      if (!well_formed[j] || other.kind == ElementKind::poi) continue;
      const double d = other.kind == ElementKind::street ? polyline_distance(p, other.geometry)
                                                         : ring_boundary_distance(p, other.geometry);
      if (d < rules.min_symbol_clearance_mm)
        warn("symbol-clearance", poi.id,
             "poi '" + poi.id + "' is " + detail::format_mm(d) + " mm from '" + other.id + "'");
    }
  }
  return issues;
}

}  // namespace tactilemap
