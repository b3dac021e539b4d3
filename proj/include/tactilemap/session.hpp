#pragma once

// One exploration session: wire messages in, announcements out, and an
// append-only JSON Lines log that replays byte-for-byte.

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "json.hpp"

#include "tactilemap/engine_config.hpp"
#include "tactilemap/fixture_map.hpp"
#include "tactilemap/gesture_recognizer.hpp"
#include "tactilemap/interaction_controller.hpp"
#include "tactilemap/protocol.hpp"
#include "tactilemap/spatial_index.hpp"
#include "tactilemap/speech_queue.hpp"
#include "tactilemap/svg_profile.hpp"

namespace tactilemap {

// ---------------------------------------------------------------------------
// Maps available by id

struct LoadedMap {
  std::shared_ptr<const MapDocument> doc;
  std::shared_ptr<const SpatialIndex> index;
};

inline LoadedMap make_loaded_map(MapDocument doc, double cell_mm) {
  auto shared = std::make_shared<const MapDocument>(std::move(doc));
  auto index = std::make_shared<const SpatialIndex>(shared, cell_mm);
  return {std::move(shared), std::move(index)};
}

/// Immutable once shared; safe to use from concurrent sessions.
class MapCatalog {
 public:
  static constexpr std::string_view kFixtureId = "fixture";

  /// Catalog holding the built-in fixture under "fixture".
  static MapCatalog with_fixture(double cell_mm = 10.0) {
    MapCatalog c;
    c.add(std::string(kFixtureId), fixture_city_map(), cell_mm);
    return c;
  }

  void add(std::string id, MapDocument doc, double cell_mm = 10.0) {
    maps_.insert_or_assign(std::move(id), make_loaded_map(std::move(doc), cell_mm));
  }

  std::optional<LoadedMap> find(std::string_view id) const {
    auto it = maps_.find(id);
    if (it == maps_.end()) return std::nullopt;
    return it->second;
  }

  std::vector<std::string> ids() const {
    std::vector<std::string> out;
    for (const auto& [id, m] : maps_) out.push_back(id);
    return out;
  }

 private:
  std::map<std::string, LoadedMap, std::less<>> maps_;
};

// ---------------------------------------------------------------------------
// Session log

enum class Direction { in, out };

struct LogRecord {
  Direction dir = Direction::in;
  std::int64_t t_ms = 0;
  ordered_json msg;
  /// For out records: index of the in record that caused it.
  std::optional<std::size_t> cause_seq;
};

inline ordered_json to_json(const LogRecord& r) {
  ordered_json j;
  j["dir"] = r.dir == Direction::in ? "in" : "out";
  j["t_ms"] = r.t_ms;
  j["msg"] = r.msg;
  if (r.cause_seq) j["cause_seq"] = *r.cause_seq;
  return j;
}

class LogError : public std::runtime_error {
 public:
  explicit LogError(const std::string& what) : std::runtime_error("MalformedLog: " + what) {}
};

class SessionLog {
 public:
  /// Enforces append-only invariants: t_ms non-decreasing, first record is an
  /// incoming load_map, out records point at an earlier in record.
  void append(LogRecord r) {
    if (records_.empty()) {
      if (r.dir != Direction::in || !r.msg.is_object() || r.msg.value("type", "") != "load_map")
        throw LogError("first record must be an incoming load_map");
    }
    if (!records_.empty() && r.t_ms < records_.back().t_ms)
      throw LogError("t_ms decreases at record " + std::to_string(records_.size()));
    if (r.t_ms < 0) throw LogError("negative t_ms");
    if (r.dir == Direction::out) {
      if (!r.cause_seq || *r.cause_seq >= records_.size() || records_[*r.cause_seq].dir != Direction::in)
        throw LogError("out record " + std::to_string(records_.size()) + " has no valid cause_seq");
    } else if (r.cause_seq) {
      throw LogError("in record " + std::to_string(records_.size()) + " carries a cause_seq");
    }
    records_.push_back(std::move(r));
  }

  const std::vector<LogRecord>& records() const { return records_; }
  bool empty() const { return records_.empty(); }

  std::string to_jsonl() const {
    std::string out;
    for (const auto& r : records_) {
      out += to_json(r).dump();
      out += '\n';
    }
    return out;
  }

  static SessionLog from_jsonl(std::string_view text) {
    SessionLog log;
    std::size_t line_no = 0;
    while (!text.empty()) {
      const auto nl = text.find('\n');
      std::string_view line = text.substr(0, nl);
      text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
      ++line_no;
      if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
      const auto where = "line " + std::to_string(line_no) + ": ";
      ordered_json j = ordered_json::parse(line, nullptr, false);
      if (j.is_discarded() || !j.is_object()) throw LogError(where + "not a JSON object");
      LogRecord r;
      const auto dir = j.find("dir");
      if (dir == j.end() || !dir->is_string() || (*dir != "in" && *dir != "out"))
        throw LogError(where + "dir must be \"in\" or \"out\"");
      r.dir = *dir == "in" ? Direction::in : Direction::out;
      const auto t = j.find("t_ms");
      if (t == j.end() || !t->is_number_integer()) throw LogError(where + "t_ms must be an integer");
      r.t_ms = t->get<std::int64_t>();
      const auto msg = j.find("msg");
      if (msg == j.end() || !msg->is_object()) throw LogError(where + "msg must be an object");
      r.msg = *msg;
      if (const auto c = j.find("cause_seq"); c != j.end()) {
        if (!c->is_number_unsigned()) throw LogError(where + "cause_seq must be a non-negative integer");
        r.cause_seq = c->get<std::size_t>();
      }
      try {
        if (r.dir == Direction::in)
          client_message_from_json(r.msg);
        else
          server_message_from_json(r.msg);
      } catch (const ProtocolError& e) {
        throw LogError(where + e.what());
      }
      try {
        log.append(std::move(r));
      } catch (const LogError& e) {
        throw LogError(where + e.what());
      }
    }
    if (log.empty()) throw LogError("log is empty");
    return log;
  }

 private:
  std::vector<LogRecord> records_;
};

// ---------------------------------------------------------------------------
// Session

inline std::string render_transcript(const std::vector<ServerMessage>& messages) {
  std::string out;
  for (const auto& m : messages) {
    out += to_frame(m);
    out += '\n';
  }
  return out;
}

class Session {
 public:
  using RecordObserver = std::function<void(const LogRecord&)>;

  Session(EngineConfig config, std::shared_ptr<const MapCatalog> catalog, RecordObserver observer = {})
      : config_(config), catalog_(std::move(catalog)), observer_(std::move(observer)) {
    if (!catalog_) catalog_ = std::make_shared<const MapCatalog>();
  }

  /// Decodes one text frame. Undecodable frames get a bad-frame error and
  /// leave no trace in the session or its log.
  std::vector<ServerMessage> handle_frame(std::string_view frame) {
    ClientMessage m;
    try {
      m = parse_client_frame(frame);
    } catch (const ProtocolError& e) {
      return {ErrorMessage{std::string(error_code::bad_frame), e.what()}};
    }
    return handle(m);
  }

  std::vector<ServerMessage> handle(const ClientMessage& m) {
    const std::int64_t t = std::visit(
        [&](const auto& v) -> std::int64_t {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, Touch>)
            return v.sample.t_ms;
          else
            return v.t_ms.value_or(clock_);
        },
        m);

    // Recording starts with the first load_map accepted for processing;
    // nothing before it changes session state.
    if (!recording_ && !ended_ && std::holds_alternative<LoadMap>(m)) recording_ = true;

    std::vector<ServerMessage> out = process(m, t);

    if (recording_) {
      const std::int64_t stamp = std::max(t, last_logged_t_);
      last_logged_t_ = stamp;
      const std::size_t seq = log_.records().size();
      record({Direction::in, stamp, to_json(m), std::nullopt});
      for (const auto& o : out) record({Direction::out, stamp, to_json(o), seq});
    }
    return out;
  }

  const SessionLog& log() const { return log_; }
  bool ended() const { return ended_; }
  bool has_map() const { return map_.has_value(); }
  std::int64_t clock_ms() const { return clock_; }

 private:
  std::vector<ServerMessage> process(const ClientMessage& m, std::int64_t t) {
    std::vector<ServerMessage> out;
    auto error = [&](std::string_view code, std::string message) {
      out.push_back(ErrorMessage{std::string(code), std::move(message)});
      return out;
    };
    if (ended_) return error(error_code::session_ended, "session already ended");

    if (const auto* load = std::get_if<LoadMap>(&m)) {
      if (t < clock_) return error(error_code::out_of_order, "load_map t_ms precedes session clock");
      std::optional<LoadedMap> loaded;
      if (load->map_id) {
        loaded = catalog_->find(*load->map_id);
        if (!loaded) return error(error_code::unknown_map, "unknown map_id '" + *load->map_id + "'");
      } else {
        try {
          loaded = make_loaded_map(parse_map(*load->svg), config_.index_cell_mm);
        } catch (const MapError& e) {
          return error(error_code::map_parse, e.what());
        }
      }
      clock_ = t;
      map_ = std::move(*loaded);
      recognizer_.emplace(config_.gesture, map_->doc->canvas_width_mm, map_->doc->canvas_height_mm);
      controller_.emplace(map_->index, config_.controller);
      queue_ = SpeechQueue{};
      out.push_back(MapLoaded{static_cast<std::int64_t>(map_->doc->elements.size())});
      return out;
    }

    if (const auto* end = std::get_if<EndSession>(&m)) {
      if (end->t_ms && t < clock_) return error(error_code::out_of_order, "end_session t_ms precedes session clock");
      clock_ = std::max(clock_, t);
      ended_ = true;
      return out;
    }

    if (!map_) return error(error_code::no_map, "load_map must come first");
    if (t < clock_) return error(error_code::out_of_order, "t_ms " + std::to_string(t) + " precedes session clock " + std::to_string(clock_));

    std::vector<GestureEvent> events;
    try {
      if (const auto* touch = std::get_if<Touch>(&m))
        events = recognizer_->feed_sample(touch->sample);
      else
        events = recognizer_->advance_time(t);
    } catch (const GestureError& e) {
      switch (e.code()) {
        case GestureErrc::out_of_order_timestamp: return error(error_code::out_of_order, e.what());
        case GestureErrc::unknown_touch_id: return error(error_code::unknown_touch, e.what());
        default: return error(error_code::protocol, e.what());
      }
    }
    clock_ = t;

    Emitter emitter{out};
    for (const auto& g : events) {
      auto outcome = controller_->handle_gesture_traced(g, g.t_ms);
      out.push_back(GestureNotice{std::string(to_string(g.kind)), outcome.element_id});
      for (auto& a : outcome.announcements) queue_.enqueue(std::move(a), g.t_ms);
      flush_immediate(queue_, emitter, g.t_ms);
    }
    if (const auto* level = std::get_if<SelectLevel>(&m)) {
      queue_.enqueue(controller_->select_level(level->level), t);
      flush_immediate(queue_, emitter, t);
    }
    return out;
  }

  /// Speech backend that turns played utterances into wire messages.
  struct Emitter : SpeechBackend {
    explicit Emitter(std::vector<ServerMessage>& sink) : out(sink) {}
    void play(const Utterance& u, std::int64_t) override {
      std::visit([&](const auto& p) { out.push_back(p); }, u.payload);
    }
    void cancel(const Utterance&, std::int64_t) override {}
    std::vector<ServerMessage>& out;
  };

  void record(LogRecord r) {
    log_.append(std::move(r));
    if (observer_) observer_(log_.records().back());
  }

  EngineConfig config_;
  std::shared_ptr<const MapCatalog> catalog_;
  RecordObserver observer_;
  std::optional<LoadedMap> map_;
  std::optional<Recognizer> recognizer_;
  std::optional<InteractionController> controller_;
  SpeechQueue queue_;
  SessionLog log_;
  std::int64_t clock_ = 0;
  std::int64_t last_logged_t_ = 0;
  bool recording_ = false;
  bool ended_ = false;
};

// ---------------------------------------------------------------------------
// Replay

/// Out records of a log rendered one message per line.
inline std::string recorded_transcript(const SessionLog& log) {
  std::vector<ServerMessage> outs;
  for (const auto& r : log.records())
    if (r.dir == Direction::out) outs.push_back(server_message_from_json(r.msg));
  return render_transcript(outs);
}

/// Re-runs every incoming record through a fresh session.
inline std::string replay_log(const SessionLog& log, const EngineConfig& config,
                              std::shared_ptr<const MapCatalog> catalog) {
  if (log.empty()) throw LogError("log is empty");
  Session session(config, std::move(catalog));
  std::vector<ServerMessage> outs;
  for (const auto& r : log.records()) {
    if (r.dir != Direction::in) continue;
    ClientMessage m;
    try {
      m = client_message_from_json(r.msg);
    } catch (const ProtocolError& e) {
      throw LogError(e.what());
    }
    auto produced = session.handle(m);
    outs.insert(outs.end(), std::make_move_iterator(produced.begin()), std::make_move_iterator(produced.end()));
  }
  return render_transcript(outs);
}

}  // namespace tactilemap
