#pragma once

// Wire messages: one JSON object per WebSocket text frame.
//
//   in:  load_map{map_id|svg}, touch{phase,touch_id,x,y,t_ms},
//        select_level{level}, end_session{}
//   out: map_loaded{elements}, speak{text,priority,interrupt},
//        earcon{kind}, gesture{kind,element_id}, error{code,message}
//
// load_map, select_level and end_session also accept an optional t_ms.

#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

#include "json.hpp"

#include "tactilemap/gesture_recognizer.hpp"
#include "tactilemap/interaction_controller.hpp"

namespace tactilemap {

using ordered_json = nlohmann::ordered_json;

struct LoadMap {
  std::optional<std::string> map_id;
  std::optional<std::string> svg;
  std::optional<std::int64_t> t_ms;

  friend bool operator==(const LoadMap&, const LoadMap&) = default;
};

struct Touch {
  TouchSample sample;

  friend bool operator==(const Touch&, const Touch&) = default;
};

struct SelectLevel {
  int level = 0;
  std::optional<std::int64_t> t_ms;

  friend bool operator==(const SelectLevel&, const SelectLevel&) = default;
};

struct EndSession {
  std::optional<std::int64_t> t_ms;

  friend bool operator==(const EndSession&, const EndSession&) = default;
};

using ClientMessage = std::variant<LoadMap, Touch, SelectLevel, EndSession>;

struct MapLoaded {
  std::int64_t elements = 0;

  friend bool operator==(const MapLoaded&, const MapLoaded&) = default;
};

/// Instrumentation: which gesture was recognized and what it resolved to.
struct GestureNotice {
  std::string kind;
  std::optional<std::string> element_id;

  friend bool operator==(const GestureNotice&, const GestureNotice&) = default;
};

struct ErrorMessage {
  std::string code;
  std::string message;

  friend bool operator==(const ErrorMessage&, const ErrorMessage&) = default;
};

using ServerMessage = std::variant<MapLoaded, Speak, Earcon, GestureNotice, ErrorMessage>;

/// Error codes carried by ErrorMessage.
namespace error_code {
inline constexpr std::string_view bad_frame = "bad-frame";
inline constexpr std::string_view no_map = "no-map";
inline constexpr std::string_view unknown_map = "unknown-map";
inline constexpr std::string_view map_parse = "map-parse";
inline constexpr std::string_view out_of_order = "out-of-order";
inline constexpr std::string_view unknown_touch = "unknown-touch";
inline constexpr std::string_view protocol = "protocol";
inline constexpr std::string_view session_ended = "session-ended";
}  // namespace error_code

class ProtocolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace protocol_detail {

template <class Json>
const Json& field(const Json& j, const char* name) {
  auto it = j.find(name);
  if (it == j.end()) throw ProtocolError(std::string("missing field '") + name + "'");
  return *it;
}

template <class Json>
std::int64_t integer(const Json& v, const char* name, std::int64_t lo, std::int64_t hi) {
  if (!v.is_number_integer()) throw ProtocolError(std::string("'") + name + "' must be an integer");
  if (v.is_number_unsigned() && v.template get<std::uint64_t>() > static_cast<std::uint64_t>(hi))
    throw ProtocolError(std::string("'") + name + "' out of range");
  const auto x = v.template get<std::int64_t>();
  if (x < lo || x > hi) throw ProtocolError(std::string("'") + name + "' out of range");
  return x;
}

template <class Json>
std::string text(const Json& v, const char* name) {
  if (!v.is_string()) throw ProtocolError(std::string("'") + name + "' must be a string");
  return v.template get<std::string>();
}

template <class Json>
std::optional<std::int64_t> optional_time(const Json& j) {
  auto it = j.find("t_ms");
  if (it == j.end()) return std::nullopt;
  return integer(*it, "t_ms", 0, std::numeric_limits<std::int64_t>::max());
}

}  // namespace protocol_detail

template <class Json>
ClientMessage client_message_from_json(const Json& j) {
  using namespace protocol_detail;
  if (!j.is_object()) throw ProtocolError("frame must be a JSON object");
  const std::string type = text(field(j, "type"), "type");
  if (type == "load_map") {
    LoadMap m;
    const bool has_id = j.contains("map_id");
    const bool has_svg = j.contains("svg");
    if (has_id == has_svg) throw ProtocolError("load_map needs exactly one of map_id or svg");
    if (has_id) m.map_id = text(j.at("map_id"), "map_id");
    if (has_svg) m.svg = text(j.at("svg"), "svg");
    m.t_ms = optional_time(j);
    return m;
  }
  if (type == "touch") {
    Touch m;
    const auto phase = parse_touch_phase(text(field(j, "phase"), "phase"));
    if (!phase) throw ProtocolError("phase must be down, move or up");
    m.sample.phase = *phase;
    m.sample.touch_id = static_cast<int>(integer(field(j, "touch_id"), "touch_id", 0, std::numeric_limits<int>::max()));
    const auto& x = field(j, "x");
    const auto& y = field(j, "y");
    if (!x.is_number() || !y.is_number()) throw ProtocolError("x and y must be numbers");
    m.sample.x = x.template get<double>();
    m.sample.y = y.template get<double>();
    m.sample.t_ms = integer(field(j, "t_ms"), "t_ms", 0, std::numeric_limits<std::int64_t>::max());
    return m;
  }
  if (type == "select_level") {
    SelectLevel m;
    m.level = static_cast<int>(integer(field(j, "level"), "level", 0, 1'000'000));
    m.t_ms = optional_time(j);
    return m;
  }
  if (type == "end_session") return EndSession{optional_time(j)};
  throw ProtocolError("unknown message type '" + type + "'");
}

inline ClientMessage parse_client_frame(std::string_view frame) {
  ordered_json j = ordered_json::parse(frame, nullptr, false);
  if (j.is_discarded()) throw ProtocolError("frame is not valid JSON");
  return client_message_from_json(j);
}

inline ordered_json to_json(const ClientMessage& m) {
  return std::visit(
      [](const auto& v) -> ordered_json {
        using T = std::decay_t<decltype(v)>;
        ordered_json j;
        if constexpr (std::is_same_v<T, LoadMap>) {
          j["type"] = "load_map";
          if (v.map_id) j["map_id"] = *v.map_id;
          if (v.svg) j["svg"] = *v.svg;
          if (v.t_ms) j["t_ms"] = *v.t_ms;
        } else if constexpr (std::is_same_v<T, Touch>) {
          j["type"] = "touch";
          j["phase"] = to_string(v.sample.phase);
          j["touch_id"] = v.sample.touch_id;
          j["x"] = v.sample.x;
          j["y"] = v.sample.y;
          j["t_ms"] = v.sample.t_ms;
        } else if constexpr (std::is_same_v<T, SelectLevel>) {
          j["type"] = "select_level";
          j["level"] = v.level;
          if (v.t_ms) j["t_ms"] = *v.t_ms;
        } else {
          j["type"] = "end_session";
          if (v.t_ms) j["t_ms"] = *v.t_ms;
        }
        return j;
      },
      m);
}

inline ordered_json to_json(const ServerMessage& m) {
  return std::visit(
      [](const auto& v) -> ordered_json {
        using T = std::decay_t<decltype(v)>;
        ordered_json j;
        if constexpr (std::is_same_v<T, MapLoaded>) {
          j["type"] = "map_loaded";
          j["elements"] = v.elements;
        } else if constexpr (std::is_same_v<T, Speak>) {
          j["type"] = "speak";
          j["text"] = v.text;
          j["priority"] = to_string(v.priority);
          j["interrupt"] = v.interrupt;
        } else if constexpr (std::is_same_v<T, Earcon>) {
          j["type"] = "earcon";
          j["kind"] = to_string(v.kind);
        } else if constexpr (std::is_same_v<T, GestureNotice>) {
          j["type"] = "gesture";
          j["kind"] = v.kind;
          j["element_id"] = v.element_id ? ordered_json(*v.element_id) : ordered_json(nullptr);
        } else {
          j["type"] = "error";
          j["code"] = v.code;
          j["message"] = v.message;
        }
        return j;
      },
      m);
}

template <class Json>
ServerMessage server_message_from_json(const Json& j) {
  using namespace protocol_detail;
  if (!j.is_object()) throw ProtocolError("message must be a JSON object");
  const std::string type = text(field(j, "type"), "type");
  if (type == "map_loaded")
    return MapLoaded{integer(field(j, "elements"), "elements", 0, std::numeric_limits<std::int64_t>::max())};
  if (type == "speak") {
    const auto priority = parse_priority(text(field(j, "priority"), "priority"));
    if (!priority) throw ProtocolError("bad priority");
    const auto& interrupt = field(j, "interrupt");
    if (!interrupt.is_boolean()) throw ProtocolError("'interrupt' must be a boolean");
    return Speak{text(field(j, "text"), "text"), *priority, interrupt.template get<bool>()};
  }
  if (type == "earcon") {
    const auto kind = parse_earcon_kind(text(field(j, "kind"), "kind"));
    if (!kind) throw ProtocolError("bad earcon kind");
    return Earcon{*kind};
  }
  if (type == "gesture") {
    GestureNotice g{text(field(j, "kind"), "kind"), std::nullopt};
    const auto& id = field(j, "element_id");
    if (!id.is_null()) g.element_id = text(id, "element_id");
    return g;
  }
  if (type == "error") return ErrorMessage{text(field(j, "code"), "code"), text(field(j, "message"), "message")};
  throw ProtocolError("unknown message type '" + type + "'");
}

inline std::string to_frame(const ServerMessage& m) { return to_json(m).dump(); }
inline std::string to_frame(const ClientMessage& m) { return to_json(m).dump(); }

}  // namespace tactilemap
