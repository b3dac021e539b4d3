#pragma once

// Planar geometry on map millimeters: distances, containment, centroids.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>

namespace tactilemap {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
inline Point operator*(Point a, double s) { return {a.x * s, a.y * s}; }

inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }

inline double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

struct Box {
  Point min{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  Point max{-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};

  void extend(Point p) {
    min.x = std::min(min.x, p.x);
    min.y = std::min(min.y, p.y);
    max.x = std::max(max.x, p.x);
    max.y = std::max(max.y, p.y);
  }
  bool empty() const { return min.x > max.x || min.y > max.y; }
};

inline Box bounding_box(std::span<const Point> pts) {
  Box b;
  for (const Point& p : pts) b.extend(p);
  return b;
}

inline double point_segment_distance(Point p, Point a, Point b) {
  const Point ab = b - a;
  const double len2 = dot(ab, ab);
  if (len2 == 0.0) return distance(p, a);
  const double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
  return distance(p, a + ab * t);
}

/// Minimum distance from `p` to an open polyline. A single vertex degrades to a point.
inline double polyline_distance(Point p, std::span<const Point> line) {
  if (line.empty()) return std::numeric_limits<double>::infinity();
  if (line.size() == 1) return distance(p, line.front());
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < line.size(); ++i)
    best = std::min(best, point_segment_distance(p, line[i - 1], line[i]));
  return best;
}

/// Minimum distance from `p` to the boundary of a ring (implicitly closed).
inline double ring_boundary_distance(Point p, std::span<const Point> ring) {
  double best = polyline_distance(p, ring);
  if (ring.size() >= 2) best = std::min(best, point_segment_distance(p, ring.back(), ring.front()));
  return best;
}

/// Even-odd containment; the ring closes implicitly. Boundary points may land either way.
inline bool point_in_ring(Point p, std::span<const Point> ring) {
  bool inside = false;
  const std::size_t n = ring.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Point& a = ring[i];
    const Point& b = ring[j];
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x_at = (b.x - a.x) * (p.y - a.y) / (b.y - a.y) + a.x;
      if (p.x < x_at) inside = !inside;
    }
  }
  return inside;
}

inline double polyline_length(std::span<const Point> line) {
  double len = 0.0;
  for (std::size_t i = 1; i < line.size(); ++i) len += distance(line[i - 1], line[i]);
  return len;
}

inline double ring_perimeter(std::span<const Point> ring) {
  if (ring.size() < 2) return 0.0;
  return polyline_length(ring) + distance(ring.back(), ring.front());
}

/// Point halfway along the polyline by arc length.
inline Point polyline_midpoint(std::span<const Point> line) {
  if (line.empty()) return {};
  const double half = polyline_length(line) / 2.0;
  double walked = 0.0;
  for (std::size_t i = 1; i < line.size(); ++i) {
    const double seg = distance(line[i - 1], line[i]);
    if (seg > 0.0 && walked + seg >= half) {
      const double t = (half - walked) / seg;
      return line[i - 1] + (line[i] - line[i - 1]) * t;
    }
    walked += seg;
  }
  return line.back();
}

inline double ring_signed_area(std::span<const Point> ring) {
  double twice = 0.0;
  const std::size_t n = ring.size();
  for (std::size_t i = 0; i < n; ++i) twice += cross(ring[i], ring[(i + 1) % n]);
  return twice / 2.0;
}

inline double ring_area(std::span<const Point> ring) { return std::abs(ring_signed_area(ring)); }

/// Area centroid; zero-area rings fall back to the vertex mean.
inline Point ring_centroid(std::span<const Point> ring) {
  if (ring.empty()) return {};
  const std::size_t n = ring.size();
  double twice_area = 0.0;
  double cx = 0.0;
  double cy = 0.0;
  // Shift to the first vertex to keep the cross products small.
  const Point origin = ring.front();
  for (std::size_t i = 0; i < n; ++i) {
    const Point a = ring[i] - origin;
    const Point b = ring[(i + 1) % n] - origin;
    const double c = cross(a, b);
    twice_area += c;
    cx += (a.x + b.x) * c;
    cy += (a.y + b.y) * c;
  }
  if (std::abs(twice_area) < 1e-12) {
    Point sum;
    for (const Point& p : ring) sum = sum + p;
    return sum * (1.0 / static_cast<double>(n));
  }
  return Point{cx / (3.0 * twice_area), cy / (3.0 * twice_area)} + origin;
}

namespace detail {

inline int orientation(Point a, Point b, Point c) {
  const double v = cross(b - a, c - a);
  if (v > 0.0) return 1;
  if (v < 0.0) return -1;
  return 0;
}

inline bool on_segment(Point a, Point b, Point p) {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
         std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

}  // namespace detail

/// True when closed segments ab and cd share at least one point.
inline bool segments_intersect(Point a, Point b, Point c, Point d) {
  const int o1 = detail::orientation(a, b, c);
  const int o2 = detail::orientation(a, b, d);
  const int o3 = detail::orientation(c, d, a);
  const int o4 = detail::orientation(c, d, b);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && detail::on_segment(a, b, c)) return true;
  if (o2 == 0 && detail::on_segment(a, b, d)) return true;
  if (o3 == 0 && detail::on_segment(c, d, a)) return true;
  if (o4 == 0 && detail::on_segment(c, d, b)) return true;
  return false;
}

inline double segment_distance(Point a, Point b, Point c, Point d) {
  if (segments_intersect(a, b, c, d)) return 0.0;
  return std::min({point_segment_distance(a, c, d), point_segment_distance(b, c, d),
                   point_segment_distance(c, a, b), point_segment_distance(d, a, b)});
}

/// Minimum distance between two open polylines; 0 when they cross or touch.
inline double polyline_polyline_distance(std::span<const Point> p, std::span<const Point> q) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < p.size(); ++i)
    for (std::size_t j = 1; j < q.size(); ++j)
      best = std::min(best, segment_distance(p[i - 1], p[i], q[j - 1], q[j]));
  return best;
}

/// A ring is simple when no two non-adjacent edges meet and no edge is degenerate.
inline bool ring_is_simple(std::span<const Point> ring) {
  const std::size_t n = ring.size();
  if (n < 3) return false;
  for (std::size_t i = 0; i < n; ++i)
    if (ring[i] == ring[(i + 1) % n]) return false;
  for (std::size_t i = 0; i < n; ++i) {
    const Point a = ring[i];
    const Point b = ring[(i + 1) % n];
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool adjacent = j == i + 1 || (i == 0 && j == n - 1);
      const Point c = ring[j];
      const Point d = ring[(j + 1) % n];
      if (adjacent) {
        // Neighbouring edges share one vertex; they must not fold back over each other.
        const Point shared = (j == i + 1) ? b : a;
        const Point other_first = (j == i + 1) ? a : b;
        const Point other_second = (j == i + 1) ? d : c;
        if (detail::orientation(other_first, shared, other_second) == 0 &&
            dot(other_first - shared, other_second - shared) > 0.0)
          return false;
        continue;
      }
      if (segments_intersect(a, b, c, d)) return false;
    }
  }
  return true;
}

}  // namespace tactilemap
