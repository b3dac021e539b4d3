#pragma once

// Turns raw multi-touch samples into the three non-visual gestures:
// double tap, tap-and-hold, and lasso. Single taps and exploratory sliding
// produce nothing.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "tactilemap/geometry.hpp"

namespace tactilemap {

enum class TouchPhase { down, move, up };

inline std::string_view to_string(TouchPhase p) {
  switch (p) {
    case TouchPhase::down: return "down";
    case TouchPhase::move: return "move";
    case TouchPhase::up: return "up";
  }
  return "?";
}

inline std::optional<TouchPhase> parse_touch_phase(std::string_view s) {
  if (s == "down") return TouchPhase::down;
  if (s == "move") return TouchPhase::move;
  if (s == "up") return TouchPhase::up;
  return std::nullopt;
}

struct TouchSample {
  TouchPhase phase = TouchPhase::down;
  int touch_id = 0;
  double x = 0.0;
  double y = 0.0;
  std::int64_t t_ms = 0;

  friend bool operator==(const TouchSample&, const TouchSample&) = default;
};

struct GestureConfig {
  std::int64_t double_tap_max_interval_ms = 400;
  std::int64_t tap_max_duration_ms = 250;
  double tap_max_drift_mm = 3.0;
  double double_tap_max_gap_mm = 5.0;
  std::int64_t hold_min_duration_ms = 1000;
  double hold_max_drift_mm = 4.0;
  double lasso_closure_eps_mm = 10.0;
  double lasso_min_perimeter_mm = 25.0;

  friend bool operator==(const GestureConfig&, const GestureConfig&) = default;
};

enum class GestureKind { double_tap, hold_activate, hold_release, lasso };

inline std::string_view to_string(GestureKind k) {
  switch (k) {
    case GestureKind::double_tap: return "double_tap";
    case GestureKind::hold_activate: return "hold_activate";
    case GestureKind::hold_release: return "hold_release";
    case GestureKind::lasso: return "lasso";
  }
  return "?";
}

struct GestureEvent {
  GestureKind kind = GestureKind::double_tap;
  /// double_tap: centroid of both tap-downs; hold_activate: the held point.
  Point point;
  /// hold_activate / hold_release only; -1 otherwise.
  int touch_id = -1;
  /// lasso only.
  std::vector<Point> path;
  std::int64_t t_ms = 0;

  friend bool operator==(const GestureEvent&, const GestureEvent&) = default;
};

enum class GestureErrc { invalid_config, out_of_order_timestamp, unknown_touch_id, duplicate_touch_id };

inline std::string_view to_string(GestureErrc c) {
  switch (c) {
    case GestureErrc::invalid_config: return "InvalidConfig";
    case GestureErrc::out_of_order_timestamp: return "OutOfOrderTimestamp";
    case GestureErrc::unknown_touch_id: return "UnknownTouchId";
    case GestureErrc::duplicate_touch_id: return "DuplicateTouchId";
  }
  return "?";
}

class GestureError : public std::runtime_error {
 public:
  GestureError(GestureErrc code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}
  GestureErrc code() const noexcept { return code_; }

 private:
  GestureErrc code_;
};

inline void validate(const GestureConfig& c) {
  const bool positive = c.double_tap_max_interval_ms > 0 && c.tap_max_duration_ms > 0 && c.tap_max_drift_mm > 0.0 &&
                        c.double_tap_max_gap_mm > 0.0 && c.hold_min_duration_ms > 0 && c.hold_max_drift_mm > 0.0 &&
                        c.lasso_closure_eps_mm > 0.0 && c.lasso_min_perimeter_mm > 0.0;
  if (!positive) throw GestureError(GestureErrc::invalid_config, "all thresholds must be strictly positive");
  if (c.tap_max_duration_ms >= c.hold_min_duration_ms)
    throw GestureError(GestureErrc::invalid_config, "tap_max_duration_ms must be below hold_min_duration_ms");
}

class Recognizer {
 public:
  static constexpr std::size_t kMaxContacts = 10;

  explicit Recognizer(GestureConfig config = {}, double canvas_width_mm = 420.0, double canvas_height_mm = 297.0)
      : config_(config), width_(canvas_width_mm), height_(canvas_height_mm) {
    validate(config_);
  }

  const GestureConfig& config() const { return config_; }
  std::size_t live_contacts() const { return contacts_.size(); }
  std::int64_t last_time_ms() const { return last_t_; }

  std::vector<GestureEvent> feed_sample(const TouchSample& s) {
    if (s.t_ms < last_t_)
      throw GestureError(GestureErrc::out_of_order_timestamp,
                         "sample at " + std::to_string(s.t_ms) + " ms after " + std::to_string(last_t_) + " ms");
    std::vector<GestureEvent> events;

    // Validate before mutating anything so a rejected sample leaves no trace.
    const bool ignored = ignored_.contains(s.touch_id);
    const auto it = contacts_.find(s.touch_id);
    if (s.phase == TouchPhase::down) {
      if (it != contacts_.end() || ignored)
        throw GestureError(GestureErrc::duplicate_touch_id, "touch " + std::to_string(s.touch_id) + " is already down");
    } else if (it == contacts_.end() && !ignored) {
      throw GestureError(GestureErrc::unknown_touch_id, "touch " + std::to_string(s.touch_id) + " has no prior down");
    }

    collect_holds(s.t_ms, events);
    last_t_ = s.t_ms;
    const Point p{std::clamp(s.x, 0.0, width_), std::clamp(s.y, 0.0, height_)};

    if (ignored) {
      if (s.phase == TouchPhase::up) ignored_.erase(s.touch_id);
      return events;
    }

    switch (s.phase) {
      case TouchPhase::down: {
        if (contacts_.size() >= kMaxContacts) {
          ignored_.insert(s.touch_id);
          break;
        }
        Contact c;
        c.down = p;
        c.down_t = s.t_ms;
        c.path.push_back(p);
        contacts_.emplace(s.touch_id, std::move(c));
        break;
      }
      case TouchPhase::move: {
        Contact& c = it->second;
        c.path.push_back(p);
        c.max_drift = std::max(c.max_drift, distance(c.down, p));
        break;
      }
      case TouchPhase::up: {
        Contact c = std::move(it->second);
        contacts_.erase(it);
        c.path.push_back(p);
        c.max_drift = std::max(c.max_drift, distance(c.down, p));
        finish_contact(s.touch_id, c, s.t_ms, events);
        break;
      }
    }
    return events;
  }

  /// Emits hold_activate for contacts that have been stationary long enough.
  std::vector<GestureEvent> advance_time(std::int64_t now_ms) {
    std::vector<GestureEvent> events;
    if (now_ms < last_t_) return events;
    collect_holds(now_ms, events);
    last_t_ = now_ms;
    return events;
  }

  /// Drops every contact and restarts the timeline at 0.
  void reset() {
    contacts_.clear();
    ignored_.clear();
    pending_tap_.reset();
    last_t_ = 0;
  }

 private:
  struct Contact {
    Point down;
    std::int64_t down_t = 0;
    std::vector<Point> path;
    double max_drift = 0.0;
    bool hold_emitted = false;
  };

  struct Tap {
    Point down;
    std::int64_t down_t = 0;
    std::int64_t up_t = 0;
  };

  void collect_holds(std::int64_t now, std::vector<GestureEvent>& events) {
    for (auto& [id, c] : contacts_) {
      if (c.hold_emitted || c.max_drift > config_.hold_max_drift_mm) continue;
      if (now - c.down_t < config_.hold_min_duration_ms) continue;
      c.hold_emitted = true;
      events.push_back({GestureKind::hold_activate, c.down, id, {}, now});
    }
  }

  void finish_contact(int id, const Contact& c, std::int64_t up_t, std::vector<GestureEvent>& events) {
    if (c.hold_emitted) {
      events.push_back({GestureKind::hold_release, c.down, id, {}, up_t});
      return;
    }
    const bool is_tap = up_t - c.down_t <= config_.tap_max_duration_ms && c.max_drift <= config_.tap_max_drift_mm;
    if (is_tap) {
      const Tap tap{c.down, c.down_t, up_t};
      if (pending_tap_) {
        const std::int64_t gap_ms = tap.down_t - pending_tap_->up_t;
        if (gap_ms >= 0 && gap_ms <= config_.double_tap_max_interval_ms &&
            distance(tap.down, pending_tap_->down) <= config_.double_tap_max_gap_mm) {
          const Point mid = (tap.down + pending_tap_->down) * 0.5;
          pending_tap_.reset();
          events.push_back({GestureKind::double_tap, mid, -1, {}, up_t});
          return;
        }
      }
      pending_tap_ = tap;
      return;
    }
    if (c.path.size() >= 3 && polyline_length(c.path) >= config_.lasso_min_perimeter_mm &&
        distance(c.path.back(), c.path.front()) <= config_.lasso_closure_eps_mm) {
      events.push_back({GestureKind::lasso, c.down, -1, c.path, up_t});
    }
  }

  GestureConfig config_;
  double width_;
  double height_;
  std::map<int, Contact> contacts_;
  std::set<int> ignored_;
  std::optional<Tap> pending_tap_;
  std::int64_t last_t_ = 0;
};

}  // namespace tactilemap
