#pragma once

// Orders announcements for a speech backend. Earcons bypass the queue; an
// interrupting utterance cancels the one in flight and drops pending speech
// of equal or lower priority. The queue never locks: callers serialize.

#include <algorithm>
#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "tactilemap/interaction_controller.hpp"

namespace tactilemap {

struct Utterance {
  std::uint64_t seq = 0;
  Announcement payload;
  std::int64_t enqueued_at_ms = 0;
  /// Set once the utterance has been handed to a backend.
  bool started = false;

  bool is_earcon() const { return std::holds_alternative<Earcon>(payload); }
  friend bool operator==(const Utterance&, const Utterance&) = default;
};

class SpeechQueue {
 public:
  void enqueue(Announcement a, std::int64_t now_ms) {
    Utterance u{next_seq_++, std::move(a), now_ms};
    if (u.is_earcon()) {
      earcons_.push_back(std::move(u));
      return;
    }
    const Speak& speak = std::get<Speak>(u.payload);
    if (!speak.interrupt) {
      pending_.push_back(std::move(u));
      return;
    }
    if (current_) {
      cancelled_.push_back(std::move(*current_));
      current_.reset();
    }
    std::deque<Utterance> kept;
    for (auto& p : pending_) {
      if (std::get<Speak>(p.payload).priority <= speak.priority)
        cancelled_.push_back(std::move(p));
      else
        kept.push_back(std::move(p));
    }
    pending_ = std::move(kept);
    pending_.push_front(std::move(u));
  }

  /// Next utterance to vocalize. Earcons come first and never occupy the
  /// speech slot; speech is returned only when nothing is in flight.
  std::optional<Utterance> poll(std::int64_t /*now_ms*/) {
    if (!earcons_.empty()) {
      Utterance u = std::move(earcons_.front());
      earcons_.pop_front();
      return u;
    }
    if (current_ || pending_.empty()) return std::nullopt;
    current_ = std::move(pending_.front());
    pending_.pop_front();
    current_->started = true;
    return current_;
  }

  /// Backend finished (or gave up on) the in-flight utterance.
  void complete(std::uint64_t seq) {
    if (current_ && current_->seq == seq) current_.reset();
  }

  /// Utterances cancelled since the last call, in cancellation order: the
  /// interrupted one (started) and dropped pending speech (not started).
  std::vector<Utterance> drain_cancelled() { return std::exchange(cancelled_, {}); }

  const std::optional<Utterance>& in_flight() const { return current_; }
  std::size_t pending_count() const { return pending_.size() + earcons_.size(); }
  bool idle() const { return !current_ && pending_.empty() && earcons_.empty(); }

 private:
  std::uint64_t next_seq_ = 1;
  std::deque<Utterance> earcons_;
  std::deque<Utterance> pending_;
  std::optional<Utterance> current_;
  std::vector<Utterance> cancelled_;
};

/// Adapter contract for whatever turns utterances into sound.
class SpeechBackend {
 public:
  virtual ~SpeechBackend() = default;
  virtual void play(const Utterance& u, std::int64_t now_ms) = 0;
  virtual void cancel(const Utterance& u, std::int64_t now_ms) = 0;
};

/// Drives the queue against a backend whose utterances finish instantly.
inline void flush_immediate(SpeechQueue& q, SpeechBackend& backend, std::int64_t now_ms) {
  for (;;) {
    for (const auto& u : q.drain_cancelled())
      if (u.started) backend.cancel(u, now_ms);
    auto u = q.poll(now_ms);
    if (!u) break;
    backend.play(*u, now_ms);
    if (!u->is_earcon()) q.complete(u->seq);
  }
}

/// Records "t_ms TAB kind TAB text" lines: kind is speak, earcon or cancel.
class CaptureSink : public SpeechBackend {
 public:
  void play(const Utterance& u, std::int64_t now_ms) override {
    if (const auto* s = std::get_if<Speak>(&u.payload))
      line(now_ms, "speak", s->text);
    else
      line(now_ms, "earcon", std::string(to_string(std::get<Earcon>(u.payload).kind)));
  }
  void cancel(const Utterance& u, std::int64_t now_ms) override {
    if (const auto* s = std::get_if<Speak>(&u.payload)) line(now_ms, "cancel", s->text);
  }

  const std::string& transcript() const { return transcript_; }

 private:
  void line(std::int64_t t, std::string_view kind, const std::string& text) {
    transcript_ += std::to_string(t);
    transcript_ += '\t';
    transcript_ += kind;
    transcript_ += '\t';
    transcript_ += text;
    transcript_ += '\n';
  }

  std::string transcript_;
};

}  // namespace tactilemap
