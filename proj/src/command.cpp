#include "glassmsg/command.hpp"

#include <array>
#include <utility>

namespace glassmsg {
namespace {

constexpr std::array<std::pair<CommandKind, std::string_view>, 17> kCommandNames{{
    {CommandKind::RevealInterface, "RevealInterface"},
    {CommandKind::HideInterface, "HideInterface"},
    {CommandKind::OpenNotification, "OpenNotification"},
    {CommandKind::SelectContact, "SelectContact"},
    {CommandKind::StartDictation, "StartDictation"},
    {CommandKind::Send, "Send"},
    {CommandKind::OpenKeyboard, "OpenKeyboard"},
    {CommandKind::CloseKeyboard, "CloseKeyboard"},
    {CommandKind::ScrollToTop, "ScrollToTop"},
    {CommandKind::ScrollUp, "ScrollUp"},
    {CommandKind::ScrollDown, "ScrollDown"},
    {CommandKind::Reply, "Reply"},
    {CommandKind::TextTo, "TextTo"},
    {CommandKind::AppendTranscript, "AppendTranscript"},
    {CommandKind::FocusNext, "FocusNext"},
    {CommandKind::ActivateFocused, "ActivateFocused"},
    {CommandKind::NoCommand, "NoCommand"},
}};

constexpr std::array<std::pair<RingButton, std::string_view>, 5> kButtonNames{{
    {RingButton::Up, "up"},
    {RingButton::Down, "down"},
    {RingButton::Left, "left"},
    {RingButton::Right, "right"},
    {RingButton::Center, "center"},
}};

constexpr std::array<std::pair<GestureTarget, std::string_view>, 6> kTargetNames{{
    {GestureTarget::Notification, "notification"},
    {GestureTarget::Contact, "contact"},
    {GestureTarget::VoiceButton, "voice_button"},
    {GestureTarget::KeyboardButton, "keyboard_button"},
    {GestureTarget::SendButton, "send_button"},
    {GestureTarget::Anywhere, "anywhere"},
}};

template <typename E, std::size_t N>
std::string_view name_of(const std::array<std::pair<E, std::string_view>, N>& table, E value) {
  for (const auto& [k, name] : table) {
    if (k == value) return name;
  }
  return "?";
}

template <typename E, std::size_t N>
std::optional<E> value_of(const std::array<std::pair<E, std::string_view>, N>& table, std::string_view s) {
  for (const auto& [k, name] : table) {
    if (name == s) return k;
  }
  return std::nullopt;
}

}  // namespace

std::string_view to_string(CommandKind k) { return name_of(kCommandNames, k); }
std::optional<CommandKind> command_kind_from_string(std::string_view s) { return value_of(kCommandNames, s); }

std::string_view to_string(RingButton b) { return name_of(kButtonNames, b); }
std::optional<RingButton> ring_button_from_string(std::string_view s) { return value_of(kButtonNames, s); }

std::string_view to_string(GestureTarget t) { return name_of(kTargetNames, t); }
std::optional<GestureTarget> gesture_target_from_string(std::string_view s) { return value_of(kTargetNames, s); }

std::string describe(const Command& c) {
  std::string out(to_string(c.kind));
  if (!c.text.empty()) out += "(" + c.text + ")";
  if (c.notification_id) out += "#" + std::to_string(*c.notification_id);
  return out;
}

}  // namespace glassmsg
