#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "glassmsg/command.hpp"
#include "glassmsg/grammar.hpp"

namespace glassmsg {

struct SessionConfig {
  std::int64_t silence_gap_ms = 2000;
  std::int64_t boost_duration_ms = 5000;
  std::size_t max_notifications = 3;
  std::size_t window = 3;
  double base_opacity = 0.70;
  double boosted_opacity = 0.95;
  std::string self_name = "self";
  GrammarConfig grammar;
};

enum class InputFocus { Voice, Keyboard, Send };

std::string_view to_string(InputFocus f);

struct Contact {
  std::string name;
  std::int64_t last_activity_ms = 0;
  std::int64_t unread_count = 0;

  friend bool operator==(const Contact&, const Contact&) = default;
};

struct Message {
  std::string id;
  std::string sender;
  std::string recipient;
  std::string body;
  std::int64_t ts_ms = 0;

  friend bool operator==(const Message&, const Message&) = default;
};

struct Notification {
  std::int64_t id = 0;
  std::string sender;
  std::int64_t arrived_ms = 0;
  std::string preview;

  friend bool operator==(const Notification&, const Notification&) = default;
};

struct SessionState {
  bool visible = false;
  std::optional<std::string> focused_contact;
  std::size_t scroll_offset = 0;
  InputFocus input_focus = InputFocus::Voice;
  bool dictating = false;
  std::optional<std::int64_t> last_speech_ms;
  bool keyboard_open = false;
  std::string draft;
  std::vector<Contact> contacts;  // most recent activity first
  std::map<std::string, std::vector<Message>> history;
  std::vector<Notification> notifications;  // newest first
  std::map<std::string, std::int64_t> opacity_boost;  // contact -> expiry

  std::int64_t clock_ms = 0;  // latest time observed by any operation
  std::int64_t next_notification_id = 1;
  std::int64_t next_local_message = 1;

  InterpreterMode mode() const { return dictating ? InterpreterMode::Dictation : InterpreterMode::Command; }
  std::vector<std::string> contact_names() const;
  const Contact* find_contact(std::string_view name) const;

  friend bool operator==(const SessionState&, const SessionState&) = default;
};

SessionState make_session(std::span<const std::string> contacts, std::int64_t now_ms = 0);

namespace effect {

struct SendMessage {
  Message message;
  friend bool operator==(const SendMessage&, const SendMessage&) = default;
};
struct Beep {
  friend bool operator==(const Beep&, const Beep&) = default;
};
struct ShowNotification {
  Notification notification;
  friend bool operator==(const ShowNotification&, const ShowNotification&) = default;
};
struct StartDictationFeedback {
  friend bool operator==(const StartDictationFeedback&, const StartDictationFeedback&) = default;
};
struct StopDictationFeedback {
  friend bool operator==(const StopDictationFeedback&, const StopDictationFeedback&) = default;
};
struct OpacityBoost {
  std::string contact;
  std::int64_t until_ms = 0;
  friend bool operator==(const OpacityBoost&, const OpacityBoost&) = default;
};
// Draft text changed through dictation or the virtual keyboard.
struct DraftUpdated {
  InputFocus source = InputFocus::Voice;
  std::string draft;
  friend bool operator==(const DraftUpdated&, const DraftUpdated&) = default;
};
struct Error {
  std::string code;
  friend bool operator==(const Error&, const Error&) = default;
};

}  // namespace effect

using Effect = std::variant<effect::SendMessage, effect::Beep, effect::ShowNotification,
                            effect::StartDictationFeedback, effect::StopDictationFeedback, effect::OpacityBoost,
                            effect::DraftUpdated, effect::Error>;

std::string_view effect_name(const Effect& e);

struct Step {
  SessionState state;
  std::vector<Effect> effects;
};

// Every operation rejects a `now_ms` earlier than `state.clock_ms` with
// Error("clock_regression") and leaves the state untouched.

Step handle_command(const SessionState& s, const Command& c, std::int64_t now_ms, const SessionConfig& cfg = {});
Step handle_incoming(const SessionState& s, const Message& m, std::int64_t now_ms, const SessionConfig& cfg = {});
Step tick(const SessionState& s, std::int64_t now_ms, const SessionConfig& cfg = {});

// Earliest time at which `tick` would change the state, if any.
std::optional<std::int64_t> next_deadline(const SessionState& s, const SessionConfig& cfg = {});

struct RenderContact {
  std::string name;
  std::int64_t unread_count = 0;
  bool boosted = false;
  bool focused = false;
  friend bool operator==(const RenderContact&, const RenderContact&) = default;
};

struct InputPanel {
  std::string mode;  // "idle", "dictation" or "keyboard"
  std::string draft;
  InputFocus focus = InputFocus::Voice;
  friend bool operator==(const InputPanel&, const InputPanel&) = default;
};

struct RenderModel {
  static constexpr int kCanvasWidth = 2048;
  static constexpr int kCanvasHeight = 1080;
  static constexpr std::string_view kNotificationAnchor = "top-center";
  static constexpr std::string_view kChatAnchor = "middle-center";
  static constexpr std::string_view kContactAnchor = "middle-right";
  static constexpr std::string_view kInputAnchor = "bottom-center";

  bool visible = false;
  std::vector<Notification> notification_panel;
  std::optional<std::string> chat_contact;
  std::vector<Message> chat_panel;
  std::vector<RenderContact> contact_panel;
  InputPanel input_panel;
  double notification_opacity = 0;
  double chat_opacity = 0;
  double contact_opacity = 0;

  friend bool operator==(const RenderModel&, const RenderModel&) = default;
};

RenderModel render(const SessionState& s, const SessionConfig& cfg = {});

struct LoggedEffect {
  std::int64_t t = 0;
  Effect effect;
  friend bool operator==(const LoggedEffect&, const LoggedEffect&) = default;
};

using EffectLog = std::vector<LoggedEffect>;

// Owns one session's state and its effect log. Timers (silence gap,
// opacity expiry) fire at their exact deadlines whenever time advances, so a
// dictation stop is logged at last_speech + silence_gap regardless of how
// sparse the caller's events are.
class Session {
 public:
  explicit Session(SessionConfig cfg, std::span<const std::string> contacts = {}, std::int64_t start_ms = 0);

  const SessionState& state() const { return state_; }
  const SessionConfig& config() const { return cfg_; }
  const EffectLog& log() const { return log_; }

  // Each returns the effects produced by that call, timers included.
  std::vector<Effect> advance_to(std::int64_t now_ms);
  std::vector<Effect> command(const Command& c, std::int64_t now_ms);
  std::vector<Effect> incoming(const Message& m, std::int64_t now_ms);
  std::vector<Effect> tick(std::int64_t now_ms);

  std::vector<Effect> utterance(std::string_view text, std::int64_t now_ms);
  std::vector<Effect> ring(const RingEvent& e, std::int64_t now_ms);
  std::vector<Effect> gesture(const GestureEvent& g, std::int64_t now_ms);
  // Typed text; only meaningful while the virtual keyboard is open.
  std::vector<Effect> keyboard_text(std::string_view text, std::int64_t now_ms);

  RenderModel render() const { return glassmsg::render(state_, cfg_); }

 private:
  void apply(Step step, std::int64_t now_ms, std::vector<Effect>& out);

  SessionConfig cfg_;
  SessionState state_;
  EffectLog log_;
};

}  // namespace glassmsg
