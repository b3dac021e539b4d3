#pragma once

// Evaluation instruments: learning time from session logs, landmark / route /
// survey question scoring, and descriptive per-session summaries as CSV.

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "json.hpp"

#include "tactilemap/session.hpp"

namespace tactilemap {

enum class QuestionKind { landmark, route, survey };

inline std::string_view to_string(QuestionKind k) {
  switch (k) {
    case QuestionKind::landmark: return "landmark";
    case QuestionKind::route: return "route";
    case QuestionKind::survey: return "survey";
  }
  return "?";
}

inline std::optional<QuestionKind> parse_question_kind(std::string_view s) {
  if (s == "landmark") return QuestionKind::landmark;
  if (s == "route") return QuestionKind::route;
  if (s == "survey") return QuestionKind::survey;
  return std::nullopt;
}

/// Either one canonical answer text or a set of element ids (order-free).
using AnswerKey = std::variant<std::string, std::set<std::string>>;

struct Question {
  std::string id;
  QuestionKind kind = QuestionKind::landmark;
  std::string prompt;
  AnswerKey answer_key;
  int points = 1;
};

struct AnswerSheet {
  std::string session;
  std::vector<std::pair<std::string, std::string>> answers;
};

struct SpatialScores {
  double landmark = 0.0;
  double route = 0.0;
  double survey = 0.0;
  double max_landmark = 0.0;
  double max_route = 0.0;
  double max_survey = 0.0;

  friend bool operator==(const SpatialScores&, const SpatialScores&) = default;
};

struct SessionMetrics {
  std::string session;
  double learning_time_min = 0.0;
  std::int64_t double_taps = 0;
  std::int64_t lassos = 0;
  std::int64_t holds = 0;
  std::int64_t announcements = 0;
};

enum class HarnessErrc { incomplete_log, unknown_question, duplicate_answer, empty_input, mismatched_input, bad_bank };

inline std::string_view to_string(HarnessErrc c) {
  switch (c) {
    case HarnessErrc::incomplete_log: return "IncompleteLog";
    case HarnessErrc::unknown_question: return "UnknownQuestion";
    case HarnessErrc::duplicate_answer: return "DuplicateAnswer";
    case HarnessErrc::empty_input: return "EmptyInput";
    case HarnessErrc::mismatched_input: return "MismatchedInput";
    case HarnessErrc::bad_bank: return "BadQuestionBank";
  }
  return "?";
}

class HarnessError : public std::runtime_error {
 public:
  HarnessError(HarnessErrc code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}
  HarnessErrc code() const noexcept { return code_; }

 private:
  HarnessErrc code_;
};

// ---------------------------------------------------------------------------
// Learning time and log metrics

namespace harness_detail {

inline std::string message_type(const ordered_json& msg) {
  auto it = msg.find("type");
  return it != msg.end() && it->is_string() ? it->get<std::string>() : std::string{};
}

}  // namespace harness_detail

/// Minutes from the first touch to end_session.
inline double learning_time_minutes(const SessionLog& log) {
  std::optional<std::int64_t> first_touch;
  std::optional<std::int64_t> end;
  for (const auto& r : log.records()) {
    if (r.dir != Direction::in) continue;
    const auto type = harness_detail::message_type(r.msg);
    if (type == "touch" && !first_touch) first_touch = r.t_ms;
    if (type == "end_session" && !end) end = r.t_ms;
  }
  if (!first_touch) throw HarnessError(HarnessErrc::incomplete_log, "log has no touch");
  if (!end) throw HarnessError(HarnessErrc::incomplete_log, "log has no end_session");
  if (*end < *first_touch) throw HarnessError(HarnessErrc::incomplete_log, "end_session precedes the first touch");
  return static_cast<double>(*end - *first_touch) / 60000.0;
}

inline SessionMetrics session_metrics(const SessionLog& log, std::string session) {
  SessionMetrics m;
  m.session = std::move(session);
  m.learning_time_min = learning_time_minutes(log);
  for (const auto& r : log.records()) {
    if (r.dir != Direction::out) continue;
    const auto type = harness_detail::message_type(r.msg);
    if (type == "speak" || type == "earcon") {
      ++m.announcements;
    } else if (type == "gesture") {
      const auto kind = r.msg.value("kind", "");
      if (kind == "double_tap") ++m.double_taps;
      else if (kind == "lasso") ++m.lassos;
      else if (kind == "hold_activate") ++m.holds;
    }
  }
  return m;
}

// ---------------------------------------------------------------------------
// Scoring

/// Lower-cases ASCII letters, trims, and collapses internal whitespace.
inline std::string normalize_answer(std::string_view s) {
  std::string out;
  bool space = false;
  for (unsigned char c : s) {
    if (std::isspace(c)) {
      space = !out.empty();
      continue;
    }
    if (space) out += ' ';
    space = false;
    out += static_cast<char>(std::tolower(c));
  }
  return out;
}

inline bool answer_matches(const AnswerKey& key, std::string_view given) {
  if (const auto* text = std::get_if<std::string>(&key)) return normalize_answer(*text) == normalize_answer(given);
  std::set<std::string> expected;
  for (const auto& id : std::get<std::set<std::string>>(key)) expected.insert(normalize_answer(id));
  std::set<std::string> got;
  while (true) {
    const auto comma = given.find(',');
    const auto item = normalize_answer(given.substr(0, comma));
    if (!item.empty()) got.insert(item);
    if (comma == std::string_view::npos) break;
    given.remove_prefix(comma + 1);
  }
  return got == expected;
}

/// Binary per question: full points on a normalized exact match, else zero.
inline SpatialScores score_answers(std::span<const Question> bank, const AnswerSheet& sheet) {
  SpatialScores s;
  for (const auto& q : bank) {
    switch (q.kind) {
      case QuestionKind::landmark: s.max_landmark += q.points; break;
      case QuestionKind::route: s.max_route += q.points; break;
      case QuestionKind::survey: s.max_survey += q.points; break;
    }
  }
  std::set<std::string> answered;
  for (const auto& [qid, given] : sheet.answers) {
    const auto it = std::find_if(bank.begin(), bank.end(), [&](const Question& q) { return q.id == qid; });
    if (it == bank.end()) throw HarnessError(HarnessErrc::unknown_question, "no question '" + qid + "'");
    if (!answered.insert(qid).second)
      throw HarnessError(HarnessErrc::duplicate_answer, "question '" + qid + "' answered twice");
    if (!answer_matches(it->answer_key, given)) continue;
    switch (it->kind) {
      case QuestionKind::landmark: s.landmark += it->points; break;
      case QuestionKind::route: s.route += it->points; break;
      case QuestionKind::survey: s.survey += it->points; break;
    }
  }
  return s;
}

// ---------------------------------------------------------------------------
// Question bank file: a JSON list of
//   {"id", "kind", "prompt", "answer": string | [element ids], "points"}

inline std::vector<Question> question_bank_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw HarnessError(HarnessErrc::bad_bank, "question bank must be a JSON list");
  std::vector<Question> bank;
  std::set<std::string> ids;
  for (const auto& item : j) {
    try {
      Question q;
      q.id = item.at("id").get<std::string>();
      const auto kind = parse_question_kind(item.at("kind").get<std::string>());
      if (!kind) throw HarnessError(HarnessErrc::bad_bank, "question '" + q.id + "' has an unknown kind");
      q.kind = *kind;
      q.prompt = item.at("prompt").get<std::string>();
      const auto& answer = item.at("answer");
      if (answer.is_array())
        q.answer_key = answer.get<std::set<std::string>>();
      else
        q.answer_key = answer.get<std::string>();
      q.points = item.value("points", 1);
      if (q.points < 1) throw HarnessError(HarnessErrc::bad_bank, "question '" + q.id + "' must be worth >= 1 point");
      if (!ids.insert(q.id).second) throw HarnessError(HarnessErrc::bad_bank, "duplicate question id '" + q.id + "'");
      bank.push_back(std::move(q));
    } catch (const nlohmann::json::exception& e) {
      throw HarnessError(HarnessErrc::bad_bank, e.what());
    }
  }
  return bank;
}

inline nlohmann::json to_json(const Question& q) {
  nlohmann::json j{{"id", q.id}, {"kind", to_string(q.kind)}, {"prompt", q.prompt}, {"points", q.points}};
  if (const auto* text = std::get_if<std::string>(&q.answer_key))
    j["answer"] = *text;
  else
    j["answer"] = std::get<std::set<std::string>>(q.answer_key);
  return j;
}

inline std::vector<Question> load_question_bank(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw HarnessError(HarnessErrc::bad_bank, "cannot open '" + path.string() + "'");
  nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
  if (j.is_discarded()) throw HarnessError(HarnessErrc::bad_bank, "'" + path.string() + "' is not valid JSON");
  return question_bank_from_json(j);
}

// ---------------------------------------------------------------------------
// Summaries

struct VariableSummary {
  double mean = 0.0;
  /// Sample standard deviation (n - 1); absent for a single session.
  std::optional<double> sd;
};

inline VariableSummary describe(std::span<const double> values) {
  if (values.empty()) throw HarnessError(HarnessErrc::empty_input, "no values");
  VariableSummary s;
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double sq = 0.0;
    for (double v : values) sq += (v - s.mean) * (v - s.mean);
    s.sd = std::sqrt(sq / static_cast<double>(values.size() - 1));
  }
  return s;
}

struct SummaryRow {
  std::string session;
  double learning_min = 0.0;
  double landmark = 0.0;
  double route = 0.0;
  double survey = 0.0;
  double double_taps = 0.0;
  double lassos = 0.0;
  double holds = 0.0;
};

struct SummaryTable {
  static constexpr std::string_view kCsvHeader = "session,learning_min,L,R,S,double_taps,lassos,holds";
  static constexpr std::size_t kVariables = 7;

  std::vector<SummaryRow> rows;
  std::array<VariableSummary, kVariables> columns{};

  const VariableSummary& learning_min() const { return columns[0]; }
  const VariableSummary& landmark() const { return columns[1]; }
  const VariableSummary& route() const { return columns[2]; }
  const VariableSummary& survey() const { return columns[3]; }

  /// One row per session, then a "mean" row and an "sd" row. Undefined
  /// standard deviations are empty fields.
  std::string to_csv() const {
    std::string out(kCsvHeader);
    out += '\n';
    auto number = [&](double v) {
      if (v == 0.0) v = 0.0;
      std::array<char, 32> buf{};
      const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
      out.append(buf.data(), ptr);
    };
    for (const auto& r : rows) {
      out += r.session;
      for (double v : {r.learning_min, r.landmark, r.route, r.survey, r.double_taps, r.lassos, r.holds}) {
        out += ',';
        number(v);
      }
      out += '\n';
    }
    out += "mean";
    for (const auto& c : columns) {
      out += ',';
      number(c.mean);
    }
    out += "\nsd";
    for (const auto& c : columns) {
      out += ',';
      if (c.sd) number(*c.sd);
    }
    out += '\n';
    return out;
  }
};

/// Pairs metrics[i] with scores[i] and describes every variable.
inline SummaryTable summarize_sessions(std::span<const SessionMetrics> metrics, std::span<const SpatialScores> scores) {
  if (metrics.empty() || scores.empty()) throw HarnessError(HarnessErrc::empty_input, "nothing to summarize");
  if (metrics.size() != scores.size())
    throw HarnessError(HarnessErrc::mismatched_input, "metrics and scores differ in length");
  SummaryTable t;
  std::array<std::vector<double>, SummaryTable::kVariables> cols;
  for (std::size_t i = 0; i < metrics.size(); ++i) {
    const auto& m = metrics[i];
    const auto& s = scores[i];
    SummaryRow row{m.session,
                   m.learning_time_min,
                   s.landmark,
                   s.route,
                   s.survey,
                   static_cast<double>(m.double_taps),
                   static_cast<double>(m.lassos),
                   static_cast<double>(m.holds)};
    const std::array<double, SummaryTable::kVariables> values{row.learning_min, row.landmark,    row.route, row.survey,
                                                             row.double_taps,  row.lassos, row.holds};
    for (std::size_t c = 0; c < values.size(); ++c) cols[c].push_back(values[c]);
    t.rows.push_back(std::move(row));
  }
  for (std::size_t c = 0; c < cols.size(); ++c) t.columns[c] = describe(cols[c]);
  return t;
}

}  // namespace tactilemap
