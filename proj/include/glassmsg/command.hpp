#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace glassmsg {

enum class CommandKind {
  RevealInterface,
  HideInterface,
  OpenNotification,
  SelectContact,
  StartDictation,
  Send,
  OpenKeyboard,
  CloseKeyboard,
  ScrollToTop,
  ScrollUp,
  ScrollDown,
  Reply,
  TextTo,
  AppendTranscript,
  FocusNext,
  ActivateFocused,
  NoCommand,
};

// Normalized result of interpreting a voice, ring or gesture input.
//
// `text` carries the contact name for SelectContact/TextTo and the transcript
// for AppendTranscript. `notification_id` is set only when a gesture pressed a
// specific notification; a bare OpenNotification opens the newest one.
struct Command {
  CommandKind kind = CommandKind::NoCommand;
  std::string text;
  std::optional<std::int64_t> notification_id;

  static Command of(CommandKind k) { return Command{k, {}, std::nullopt}; }
  static Command select_contact(std::string name) {
    return Command{CommandKind::SelectContact, std::move(name), std::nullopt};
  }
  static Command text_to(std::string name) {
    return Command{CommandKind::TextTo, std::move(name), std::nullopt};
  }
  static Command append_transcript(std::string text) {
    return Command{CommandKind::AppendTranscript, std::move(text), std::nullopt};
  }
  static Command open_notification(std::optional<std::int64_t> id = std::nullopt) {
    return Command{CommandKind::OpenNotification, {}, id};
  }

  friend bool operator==(const Command&, const Command&) = default;
};

std::string_view to_string(CommandKind k);
std::optional<CommandKind> command_kind_from_string(std::string_view s);
std::string describe(const Command& c);

enum class InterpreterMode { Command, Dictation };

struct Utterance {
  std::string text;
  std::int64_t at_ms = 0;
};

enum class RingButton { Up, Down, Left, Right, Center };

struct RingEvent {
  RingButton button = RingButton::Center;
  // 0 for a click, otherwise the hold duration.
  std::int64_t hold_ms = 0;

  static RingEvent click(RingButton b) { return RingEvent{b, 0}; }
  static RingEvent hold(RingButton b, std::int64_t ms) { return RingEvent{b, ms}; }
  bool is_hold() const { return hold_ms > 0; }
};

std::string_view to_string(RingButton b);
std::optional<RingButton> ring_button_from_string(std::string_view s);

enum class GestureKind { Press, SwipeUp, SwipeDown };

enum class GestureTarget {
  Notification,
  Contact,
  VoiceButton,
  KeyboardButton,
  SendButton,
  Anywhere,
};

struct GestureEvent {
  GestureKind kind = GestureKind::Press;
  GestureTarget target = GestureTarget::Anywhere;
  std::int64_t notification_id = 0;  // Notification targets
  std::string contact;               // Contact targets

  static GestureEvent press(GestureTarget t) { return GestureEvent{GestureKind::Press, t, 0, {}}; }
  static GestureEvent press_notification(std::int64_t id) {
    return GestureEvent{GestureKind::Press, GestureTarget::Notification, id, {}};
  }
  static GestureEvent press_contact(std::string name) {
    return GestureEvent{GestureKind::Press, GestureTarget::Contact, 0, std::move(name)};
  }
  static GestureEvent swipe_up() { return GestureEvent{GestureKind::SwipeUp, GestureTarget::Anywhere, 0, {}}; }
  static GestureEvent swipe_down() {
    return GestureEvent{GestureKind::SwipeDown, GestureTarget::Anywhere, 0, {}};
  }
};

std::string_view to_string(GestureTarget t);
std::optional<GestureTarget> gesture_target_from_string(std::string_view s);

}  // namespace glassmsg
