#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "tactilemap/geometry.hpp"
#include "tactilemap/map_model.hpp"

namespace tactilemap {

inline constexpr double kDefaultHitToleranceMm = 5.0;

struct ElementHit {
  std::string element_id;
  ElementKind kind = ElementKind::poi;
  double distance_mm = 0.0;

  friend bool operator==(const ElementHit&, const ElementHit&) = default;
};

/// Distance from `p` to the element's geometry; 0 inside buildings and water.
inline double element_distance_mm(const MapElement& e, Point p) {
  switch (e.kind) {
    case ElementKind::poi: return distance(p, e.geometry.front());
    case ElementKind::street: return polyline_distance(p, e.geometry);
    case ElementKind::building:
    case ElementKind::water:
      if (point_in_ring(p, e.geometry)) return 0.0;
      return ring_boundary_distance(p, e.geometry);
  }
  return 0.0;
}

/// Area for polygons, length for streets, 0 for points. Used as a tie-break.
inline double element_extent(const MapElement& e) {
  switch (e.kind) {
    case ElementKind::poi: return 0.0;
    case ElementKind::street: return polyline_length(e.geometry);
    case ElementKind::building:
    case ElementKind::water: return ring_area(e.geometry);
  }
  return 0.0;
}

/// poi: its point; polygon: area centroid; street: arc-length midpoint.
inline Point reference_point(const MapElement& e) {
  switch (e.kind) {
    case ElementKind::poi: return e.geometry.front();
    case ElementKind::street: return polyline_midpoint(e.geometry);
    case ElementKind::building:
    case ElementKind::water: return ring_centroid(e.geometry);
  }
  return {};
}

/// Lower rank wins: small targets beat the containers around them.
inline int hit_priority(ElementKind k) {
  switch (k) {
    case ElementKind::poi: return 0;
    case ElementKind::street: return 1;
    case ElementKind::building: return 2;
    case ElementKind::water: return 3;
  }
  return 4;
}

/// Reference-point distance in meters.
inline double distance_between(const MapDocument& doc, std::string_view id_a, std::string_view id_b) {
  const MapElement* a = doc.find(id_a);
  if (!a) throw MapError(MapErrc::unknown_element, "no element with id '" + std::string(id_a) + "'", std::string(id_a));
  const MapElement* b = doc.find(id_b);
  if (!b) throw MapError(MapErrc::unknown_element, "no element with id '" + std::string(id_b) + "'", std::string(id_b));
  if (a == b) return 0.0;
  return distance(reference_point(*a), reference_point(*b)) * doc.scale_m_per_mm;
}

/// Uniform grid over the canvas. Each element is registered in every cell its
/// bounding box overlaps; queries dilate by the tolerance at lookup time, so
/// results do not depend on the cell size.
class SpatialIndex {
 public:
  SpatialIndex(std::shared_ptr<const MapDocument> doc, double cell_mm) : doc_(std::move(doc)), cell_mm_(cell_mm) {
    if (!doc_) throw std::invalid_argument("SpatialIndex needs a document");
    if (!(cell_mm_ > 0.0)) throw std::invalid_argument("cell size must be positive");
    cols_ = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(doc_->canvas_width_mm / cell_mm_)));
    rows_ = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(doc_->canvas_height_mm / cell_mm_)));
    cells_.resize(cols_ * rows_);
    extents_.reserve(doc_->elements.size());
    for (std::size_t i = 0; i < doc_->elements.size(); ++i) {
      const auto& e = doc_->elements[i];
      extents_.push_back(element_extent(e));
      const Box b = bounding_box(e.geometry);
      if (b.empty()) continue;
      const auto [c0, r0, c1, r1] = cell_range(b.min, b.max);
      for (std::size_t r = r0; r <= r1; ++r)
        for (std::size_t c = c0; c <= c1; ++c) cells_[r * cols_ + c].push_back(i);
    }
  }

  const MapDocument& document() const { return *doc_; }
  const std::shared_ptr<const MapDocument>& document_ptr() const { return doc_; }
  double cell_mm() const { return cell_mm_; }

  /// Winner among elements within `tolerance_mm` of `p`: priority
  /// poi > street > building > water, then distance, extent and id.
  std::optional<ElementHit> resolve_point(Point p, double tolerance_mm = kDefaultHitToleranceMm) const {
    if (!(tolerance_mm >= 0.0)) throw std::invalid_argument("tolerance must be non-negative");
    const auto candidates = candidates_in(Point{p.x - tolerance_mm, p.y - tolerance_mm},
                                          Point{p.x + tolerance_mm, p.y + tolerance_mm});
    std::optional<std::size_t> best;
    double best_distance = 0.0;
    for (std::size_t i : candidates) {
      const auto& e = doc_->elements[i];
      const double d = element_distance_mm(e, p);
      if (!(d <= tolerance_mm)) continue;
      if (!best || better(i, d, *best, best_distance)) {
        best = i;
        best_distance = d;
      }
    }
    if (!best) return std::nullopt;
    const auto& e = doc_->elements[*best];
    return ElementHit{e.id, e.kind, best_distance};
  }

  /// POI whose point lies strictly inside the lasso (even-odd), nearest the
  /// lasso's area centroid; ties by id.
  std::optional<std::string> enclosed_element(std::span<const Point> lasso_path) const {
    if (lasso_path.size() < 3) return std::nullopt;
    const Box b = bounding_box(lasso_path);
    const Point centre = ring_centroid(lasso_path);
    std::optional<std::size_t> best;
    double best_distance = 0.0;
    for (std::size_t i : candidates_in(b.min, b.max)) {
      const auto& e = doc_->elements[i];
      if (e.kind != ElementKind::poi) continue;
      const Point p = e.geometry.front();
      if (!point_in_ring(p, lasso_path) || ring_boundary_distance(p, lasso_path) == 0.0) continue;
      const double d = distance(p, centre);
      if (!best || d < best_distance || (d == best_distance && e.id < doc_->elements[*best].id)) {
        best = i;
        best_distance = d;
      }
    }
    if (!best) return std::nullopt;
    return doc_->elements[*best].id;
  }

 private:
  std::tuple<std::size_t, std::size_t, std::size_t, std::size_t> cell_range(Point lo, Point hi) const {
    auto col = [&](double x) {
      const double c = std::floor(x / cell_mm_);
      return static_cast<std::size_t>(std::clamp(c, 0.0, static_cast<double>(cols_ - 1)));
    };
    auto row = [&](double y) {
      const double r = std::floor(y / cell_mm_);
      return static_cast<std::size_t>(std::clamp(r, 0.0, static_cast<double>(rows_ - 1)));
    };
    return {col(lo.x), row(lo.y), col(hi.x), row(hi.y)};
  }

  std::vector<std::size_t> candidates_in(Point lo, Point hi) const {
    std::vector<std::size_t> out;
    const auto [c0, r0, c1, r1] = cell_range(lo, hi);
    for (std::size_t r = r0; r <= r1; ++r)
      for (std::size_t c = c0; c <= c1; ++c) {
        const auto& cell = cells_[r * cols_ + c];
        out.insert(out.end(), cell.begin(), cell.end());
      }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  bool better(std::size_t a, double da, std::size_t b, double db) const {
    const auto& ea = doc_->elements[a];
    const auto& eb = doc_->elements[b];
    return std::tuple(hit_priority(ea.kind), da, extents_[a], std::string_view(ea.id)) <
           std::tuple(hit_priority(eb.kind), db, extents_[b], std::string_view(eb.id));
  }

  std::shared_ptr<const MapDocument> doc_;
  double cell_mm_;
  std::size_t cols_ = 1;
  std::size_t rows_ = 1;
  std::vector<std::vector<std::size_t>> cells_;
  std::vector<double> extents_;
};

inline SpatialIndex build_index(std::shared_ptr<const MapDocument> doc, double cell_mm) {
  return SpatialIndex(std::move(doc), cell_mm);
}

}  // namespace tactilemap
