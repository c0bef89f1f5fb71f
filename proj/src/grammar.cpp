#include "glassmsg/grammar.hpp"

#include <array>
#include <utility>

namespace glassmsg {
namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

char ascii_lower(char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c; }

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

constexpr std::array<std::pair<std::string_view, CommandKind>, 12> kPhrases{{
    {"show chat", CommandKind::RevealInterface},
    {"hide chat", CommandKind::HideInterface},
    {"open notification", CommandKind::OpenNotification},
    {"voice message", CommandKind::StartDictation},
    {"send", CommandKind::Send},
    {"open keyboard", CommandKind::OpenKeyboard},
    {"close keyboard", CommandKind::CloseKeyboard},
    {"scroll to the top", CommandKind::ScrollToTop},
    {"scroll up", CommandKind::ScrollUp},
    {"scroll down", CommandKind::ScrollDown},
    {"reply", CommandKind::Reply},
    {"text", CommandKind::NoCommand},  // "text" alone names nobody
}};

constexpr std::string_view kTextPrefix = "text ";

// Returns the unique contact whose normalized name equals `spoken`, or
// nullptr when there is none or more than one.
const std::string* resolve_contact(std::string_view spoken, std::span<const std::string> contacts) {
  const std::string* found = nullptr;
  for (const auto& c : contacts) {
    if (normalize_phrase(c) != spoken) continue;
    if (found != nullptr) return nullptr;
    found = &c;
  }
  return found;
}

}  // namespace

std::string normalize_phrase(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (char c : trim(text)) {
    if (is_space(c)) {
      pending_space = true;
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(ascii_lower(c));
  }
  return out;
}

Command parse_utterance(std::string_view text, InterpreterMode mode, std::span<const std::string> contacts) {
  if (mode == InterpreterMode::Dictation) {
    auto body = trim(text);
    if (body.empty()) return Command::of(CommandKind::NoCommand);
    return Command::append_transcript(std::string(body));
  }

  const std::string spoken = normalize_phrase(text);
  if (spoken.empty()) return Command::of(CommandKind::NoCommand);

  for (const auto& [phrase, kind] : kPhrases) {
    if (spoken == phrase) return Command::of(kind);
  }

  if (spoken.starts_with(kTextPrefix)) {
    if (const auto* name = resolve_contact(std::string_view(spoken).substr(kTextPrefix.size()), contacts)) {
      return Command::text_to(*name);
    }
    return Command::of(CommandKind::NoCommand);
  }

  if (const auto* name = resolve_contact(spoken, contacts)) return Command::select_contact(*name);
  return Command::of(CommandKind::NoCommand);
}

Command map_ring_event(const RingEvent& e, RingContext ctx, const GrammarConfig& cfg) {
  const bool long_press = e.hold_ms >= cfg.hold_threshold_ms && e.hold_ms > 0;

  if (e.button == RingButton::Center && long_press) {
    return Command::of(ctx.visible ? CommandKind::HideInterface : CommandKind::RevealInterface);
  }
  if (ctx.keyboard_open) return Command::of(CommandKind::CloseKeyboard);

  switch (e.button) {
    case RingButton::Up:
      return Command::of(long_press ? CommandKind::ScrollToTop : CommandKind::ScrollUp);
    case RingButton::Down:
      return Command::of(CommandKind::ScrollDown);
    case RingButton::Right:
      return Command::of(CommandKind::FocusNext);
    case RingButton::Center:
      return Command::of(CommandKind::ActivateFocused);
    case RingButton::Left:
      break;
  }
  return Command::of(CommandKind::NoCommand);
}

Command map_gesture_event(const GestureEvent& g, GestureContext ctx) {
  switch (g.kind) {
    case GestureKind::SwipeUp:
      return Command::of(CommandKind::ScrollUp);
    case GestureKind::SwipeDown:
      return Command::of(CommandKind::ScrollDown);
    case GestureKind::Press:
      break;
  }

  if (ctx.keyboard_open) return Command::of(CommandKind::CloseKeyboard);

  switch (g.target) {
    case GestureTarget::Notification:
      return Command::open_notification(g.notification_id);
    case GestureTarget::Contact:
      return Command::select_contact(g.contact);
    case GestureTarget::VoiceButton:
      return Command::of(CommandKind::StartDictation);
    case GestureTarget::KeyboardButton:
      return Command::of(CommandKind::OpenKeyboard);
    case GestureTarget::SendButton:
      return Command::of(CommandKind::Send);
    case GestureTarget::Anywhere:
      break;
  }
  return Command::of(CommandKind::NoCommand);
}

}  // namespace glassmsg
