#pragma once

#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "tactilemap/gesture_recognizer.hpp"
#include "tactilemap/map_model.hpp"
#include "tactilemap/spatial_index.hpp"

namespace tactilemap {

// ---------------------------------------------------------------------------
// Announcements

/// Interrupt-clearing ladder: alert > info > detail.
enum class Priority { detail = 0, info = 1, alert = 2 };

inline std::string_view to_string(Priority p) {
  switch (p) {
    case Priority::detail: return "detail";
    case Priority::info: return "info";
    case Priority::alert: return "alert";
  }
  return "?";
}

inline std::optional<Priority> parse_priority(std::string_view s) {
  if (s == "detail") return Priority::detail;
  if (s == "info") return Priority::info;
  if (s == "alert") return Priority::alert;
  return std::nullopt;
}

enum class EarconKind { activate, confirm, error };

inline std::string_view to_string(EarconKind k) {
  switch (k) {
    case EarconKind::activate: return "activate";
    case EarconKind::confirm: return "confirm";
    case EarconKind::error: return "error";
  }
  return "?";
}

inline std::optional<EarconKind> parse_earcon_kind(std::string_view s) {
  if (s == "activate") return EarconKind::activate;
  if (s == "confirm") return EarconKind::confirm;
  if (s == "error") return EarconKind::error;
  return std::nullopt;
}

struct Speak {
  std::string text;
  Priority priority = Priority::info;
  bool interrupt = true;

  friend bool operator==(const Speak&, const Speak&) = default;
};

struct Earcon {
  EarconKind kind = EarconKind::confirm;

  friend bool operator==(const Earcon&, const Earcon&) = default;
};

using Announcement = std::variant<Speak, Earcon>;

// ---------------------------------------------------------------------------
// Phrase templates. These strings are part of the replay contract.

/// Nearest 10 m, or nearest 1 m below 20 m.
inline std::int64_t rounded_distance_m(double meters) {
  if (meters < 20.0) return static_cast<std::int64_t>(std::llround(meters));
  return static_cast<std::int64_t>(std::llround(meters / 10.0)) * 10;
}

inline std::string distance_phrase(std::string_view from, std::string_view to, double meters) {
  return "distance from " + std::string(from) + " to " + std::string(to) + ": " +
         std::to_string(rounded_distance_m(meters)) + " meters";
}

inline std::string level_label(int level) {
  switch (level) {
    case 0: return "names";
    case 1: return "descriptions";
    case 2: return "practical information";
    default: return "additional information";
  }
}

inline std::string level_phrase(int level) { return "level " + std::to_string(level) + ": " + level_label(level); }

// ---------------------------------------------------------------------------

struct ControllerConfig {
  double hit_tolerance_mm = kDefaultHitToleranceMm;
  std::int64_t distance_pair_timeout_ms = 5000;
};

enum class ControllerErrc { no_map_loaded };

class ControllerError : public std::runtime_error {
 public:
  explicit ControllerError(ControllerErrc code)
      : std::runtime_error("NoMapLoaded: controller is not bound to a map"), code_(code) {}
  ControllerErrc code() const noexcept { return code_; }

 private:
  ControllerErrc code_;
};

/// What a gesture resolved to, alongside what should be said.
struct GestureOutcome {
  std::optional<std::string> element_id;
  std::vector<Announcement> announcements;
};

class InteractionController {
 public:
  struct Armed {
    std::string element_id;
    std::int64_t armed_at_ms = 0;
  };

  InteractionController(std::shared_ptr<const SpatialIndex> index, ControllerConfig config = {})
      : index_(std::move(index)), config_(config) {}

  int current_level() const { return current_level_; }
  const std::optional<Armed>& armed() const { return armed_; }
  const ControllerConfig& config() const { return config_; }

  std::vector<Announcement> handle_gesture(const GestureEvent& g, std::int64_t now_ms) {
    return handle_gesture_traced(g, now_ms).announcements;
  }

  GestureOutcome handle_gesture_traced(const GestureEvent& g, std::int64_t now_ms) {
    if (!index_) throw ControllerError(ControllerErrc::no_map_loaded);
    const MapDocument& doc = index_->document();
    if (armed_ && now_ms - armed_->armed_at_ms > config_.distance_pair_timeout_ms) armed_.reset();

    GestureOutcome out;
    switch (g.kind) {
      case GestureKind::double_tap: {
        const auto hit = index_->resolve_point(g.point, config_.hit_tolerance_mm);
        if (!hit) {
          out.announcements.push_back(Earcon{EarconKind::error});
          break;
        }
        out.element_id = hit->element_id;
        out.announcements.push_back(Speak{element_info(doc, hit->element_id, 0), Priority::info, true});
        break;
      }
      case GestureKind::hold_activate: {
        const auto hit = index_->resolve_point(g.point, config_.hit_tolerance_mm);
        if (!hit) {
          out.announcements.push_back(Earcon{EarconKind::error});
          break;
        }
        out.element_id = hit->element_id;
        out.announcements.push_back(Earcon{EarconKind::activate});
        if (!armed_) {
          armed_ = Armed{hit->element_id, now_ms};
          break;
        }
        const MapElement& a = *doc.find(armed_->element_id);
        const MapElement& b = *doc.find(hit->element_id);
        out.announcements.push_back(
            Speak{distance_phrase(a.name, b.name, distance_between(doc, a.id, b.id)), Priority::info, true});
        armed_.reset();
        break;
      }
      case GestureKind::lasso: {
        const auto id = index_->enclosed_element(g.path);
        if (!id) {
          out.announcements.push_back(Earcon{EarconKind::error});
          break;
        }
        out.element_id = *id;
        out.announcements.push_back(Speak{element_info(doc, *id, current_level_), Priority::detail, true});
        break;
      }
      case GestureKind::hold_release:
        break;
    }
    return out;
  }

  Announcement select_level(int level) {
    if (level < 0) level = 0;
    current_level_ = level;
    return Speak{level_phrase(level), Priority::info, true};
  }

 private:
  std::shared_ptr<const SpatialIndex> index_;
  ControllerConfig config_;
  int current_level_ = 1;
  std::optional<Armed> armed_;
};

}  // namespace tactilemap
