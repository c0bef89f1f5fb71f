#include "glassmsg/session.hpp"

#include <algorithm>
#include <utility>

namespace glassmsg {
namespace {

using ErrorCode = std::optional<std::string>;

constexpr std::string_view kClockRegression = "clock_regression";

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

Contact* find_mut(SessionState& st, std::string_view name) {
  auto it = std::find_if(st.contacts.begin(), st.contacts.end(), [&](const Contact& c) { return c.name == name; });
  return it == st.contacts.end() ? nullptr : &*it;
}

// Moves `name` to the front of the contact list, creating it when unknown.
Contact& touch_contact(SessionState& st, const std::string& name, std::int64_t now_ms) {
  auto it = std::find_if(st.contacts.begin(), st.contacts.end(), [&](const Contact& c) { return c.name == name; });
  Contact c = it == st.contacts.end() ? Contact{name, now_ms, 0} : *it;
  if (it != st.contacts.end()) st.contacts.erase(it);
  c.last_activity_ms = now_ms;
  st.contacts.insert(st.contacts.begin(), std::move(c));
  return st.contacts.front();
}

void focus_contact(SessionState& st, const std::string& name) {
  st.focused_contact = name;
  if (auto* c = find_mut(st, name)) c->unread_count = 0;
}

void stop_dictation(SessionState& st, std::vector<Effect>& fx) {
  if (!st.dictating) return;
  st.dictating = false;
  fx.emplace_back(effect::StopDictationFeedback{});
}

class CommandApplier {
 public:
  CommandApplier(SessionState& st, std::vector<Effect>& fx, std::int64_t now, const SessionConfig& cfg)
      : st_(st), fx_(fx), now_(now), cfg_(cfg) {}

  ErrorCode apply(const Command& c) {
    if (c.kind == CommandKind::NoCommand) return std::nullopt;
    if (!st_.visible && c.kind != CommandKind::RevealInterface) return "hidden";

    switch (c.kind) {
      case CommandKind::RevealInterface:
        st_.visible = true;
        return std::nullopt;
      case CommandKind::HideInterface:
        stop_dictation(st_, fx_);
        st_.keyboard_open = false;
        st_.visible = false;
        return std::nullopt;
      case CommandKind::OpenNotification:
        return open_notification(c.notification_id);
      case CommandKind::SelectContact:
        if (find_mut(st_, c.text) == nullptr) return "unknown_contact";
        focus_contact(st_, c.text);
        return std::nullopt;
      case CommandKind::StartDictation:
        return start_dictation();
      case CommandKind::AppendTranscript:
        return append_transcript(c.text);
      case CommandKind::Send:
        return send();
      case CommandKind::OpenKeyboard:
        if (!st_.focused_contact) return "no_contact";
        stop_dictation(st_, fx_);
        st_.keyboard_open = true;
        st_.input_focus = InputFocus::Keyboard;
        return std::nullopt;
      case CommandKind::CloseKeyboard:
        st_.keyboard_open = false;
        return std::nullopt;
      case CommandKind::ScrollToTop:
        return scroll_to(0);
      case CommandKind::ScrollUp:
        return scroll_to(st_.scroll_offset == 0 ? 0 : st_.scroll_offset - 1);
      case CommandKind::ScrollDown:
        return scroll_to(st_.scroll_offset + 1);
      case CommandKind::Reply:
        if (auto err = apply(Command::open_notification())) return err;
        return apply(Command::of(CommandKind::StartDictation));
      case CommandKind::TextTo:
        if (auto err = apply(Command::select_contact(c.text))) return err;
        return apply(Command::of(CommandKind::StartDictation));
      case CommandKind::FocusNext:
        st_.input_focus = st_.input_focus == InputFocus::Voice      ? InputFocus::Keyboard
                          : st_.input_focus == InputFocus::Keyboard ? InputFocus::Send
                                                                    : InputFocus::Voice;
        return std::nullopt;
      case CommandKind::ActivateFocused:
        switch (st_.input_focus) {
          case InputFocus::Voice:
            return apply(Command::of(CommandKind::StartDictation));
          case InputFocus::Keyboard:
            return apply(Command::of(CommandKind::OpenKeyboard));
          case InputFocus::Send:
            return apply(Command::of(CommandKind::Send));
        }
        return std::nullopt;
      case CommandKind::NoCommand:
        break;
    }
    return std::nullopt;
  }

 private:
  ErrorCode open_notification(std::optional<std::int64_t> id) {
    auto& ns = st_.notifications;
    auto it = id ? std::find_if(ns.begin(), ns.end(), [&](const Notification& n) { return n.id == *id; }) : ns.begin();
    if (it == ns.end()) return "no_notification";
    std::string sender = it->sender;
    ns.erase(it);
    if (find_mut(st_, sender) == nullptr) touch_contact(st_, sender, now_);
    focus_contact(st_, sender);
    return std::nullopt;
  }

  ErrorCode start_dictation() {
    if (!st_.focused_contact) return "no_contact";
    if (st_.dictating) return std::nullopt;
    st_.dictating = true;
    st_.keyboard_open = false;
    st_.input_focus = InputFocus::Voice;
    st_.last_speech_ms = now_;
    fx_.emplace_back(effect::StartDictationFeedback{});
    return std::nullopt;
  }

  ErrorCode append_transcript(std::string_view text) {
    if (!st_.dictating && !st_.keyboard_open) return "not_composing";
    auto body = trim(text);
    if (body.empty()) return std::nullopt;
    if (!st_.draft.empty()) st_.draft.push_back(' ');
    st_.draft.append(body);
    if (st_.dictating) st_.last_speech_ms = now_;
    fx_.emplace_back(effect::DraftUpdated{st_.dictating ? InputFocus::Voice : InputFocus::Keyboard, st_.draft});
    return std::nullopt;
  }

  ErrorCode send() {
    if (st_.draft.empty()) return "empty_draft";
    if (!st_.focused_contact) return "no_contact";
    stop_dictation(st_, fx_);
    const std::string to = *st_.focused_contact;
    Message m{"local-" + std::to_string(st_.next_local_message++), cfg_.self_name, to, std::move(st_.draft), now_};
    st_.draft.clear();
    st_.history[to].push_back(m);
    touch_contact(st_, to, now_);
    fx_.emplace_back(effect::SendMessage{std::move(m)});
    return std::nullopt;
  }

  ErrorCode scroll_to(std::size_t offset) {
    if (st_.contacts.empty()) return std::nullopt;
    st_.scroll_offset = std::min(offset, st_.contacts.size() - 1);
    focus_contact(st_, st_.contacts[st_.scroll_offset].name);
    return std::nullopt;
  }

  SessionState& st_;
  std::vector<Effect>& fx_;
  std::int64_t now_;
  const SessionConfig& cfg_;
};

Step reject(const SessionState& s, std::string_view code) {
  return Step{s, {effect::Error{std::string(code)}}};
}

}  // namespace

std::string_view to_string(InputFocus f) {
  switch (f) {
    case InputFocus::Voice:
      return "voice";
    case InputFocus::Keyboard:
      return "keyboard";
    case InputFocus::Send:
      return "send";
  }
  return "?";
}

std::vector<std::string> SessionState::contact_names() const {
  std::vector<std::string> out;
  out.reserve(contacts.size());
  for (const auto& c : contacts) out.push_back(c.name);
  return out;
}

const Contact* SessionState::find_contact(std::string_view name) const {
  auto it = std::find_if(contacts.begin(), contacts.end(), [&](const Contact& c) { return c.name == name; });
  return it == contacts.end() ? nullptr : &*it;
}

SessionState make_session(std::span<const std::string> contacts, std::int64_t now_ms) {
  SessionState s;
  s.clock_ms = now_ms;
  for (const auto& name : contacts) {
    if (s.find_contact(name) != nullptr) continue;
    s.contacts.push_back(Contact{name, now_ms, 0});
  }
  return s;
}

std::string_view effect_name(const Effect& e) {
  struct Namer {
    std::string_view operator()(const effect::SendMessage&) const { return "SendMessage"; }
    std::string_view operator()(const effect::Beep&) const { return "Beep"; }
    std::string_view operator()(const effect::ShowNotification&) const { return "ShowNotification"; }
    std::string_view operator()(const effect::StartDictationFeedback&) const { return "StartDictationFeedback"; }
    std::string_view operator()(const effect::StopDictationFeedback&) const { return "StopDictationFeedback"; }
    std::string_view operator()(const effect::OpacityBoost&) const { return "OpacityBoost"; }
    std::string_view operator()(const effect::DraftUpdated&) const { return "DraftUpdated"; }
    std::string_view operator()(const effect::Error&) const { return "Error"; }
  };
  return std::visit(Namer{}, e);
}

Step handle_command(const SessionState& s, const Command& c, std::int64_t now_ms, const SessionConfig& cfg) {
  if (now_ms < s.clock_ms) return reject(s, kClockRegression);

  Step out{s, {}};
  CommandApplier applier(out.state, out.effects, now_ms, cfg);
  if (auto err = applier.apply(c)) return reject(s, *err);
  out.state.clock_ms = now_ms;
  return out;
}

Step handle_incoming(const SessionState& s, const Message& m, std::int64_t now_ms, const SessionConfig& cfg) {
  if (now_ms < s.clock_ms) return reject(s, kClockRegression);

  const bool own = m.sender == cfg.self_name;
  const std::string& peer = own ? m.recipient : m.sender;
  if (peer.empty() || peer == cfg.self_name) return reject(s, "bad_message");

  Step out{s, {}};
  auto& st = out.state;
  st.clock_ms = now_ms;

  auto& conv = st.history[peer];
  if (!m.id.empty() &&
      std::any_of(conv.begin(), conv.end(), [&](const Message& existing) { return existing.id == m.id; })) {
    return out;
  }
  conv.push_back(m);

  if (own) {
    touch_contact(st, peer, now_ms);
    return out;
  }

  const bool notify = !st.visible || st.focused_contact != peer;
  Contact& contact = touch_contact(st, peer, now_ms);
  const std::int64_t until = now_ms + cfg.boost_duration_ms;
  st.opacity_boost[peer] = until;

  if (notify) {
    contact.unread_count += 1;
    Notification n{st.next_notification_id++, peer, now_ms, m.body};
    st.notifications.insert(st.notifications.begin(), n);
    if (st.notifications.size() > cfg.max_notifications) st.notifications.resize(cfg.max_notifications);
    out.effects.emplace_back(effect::ShowNotification{std::move(n)});
  }
  out.effects.emplace_back(effect::Beep{});
  out.effects.emplace_back(effect::OpacityBoost{peer, until});
  return out;
}

Step tick(const SessionState& s, std::int64_t now_ms, const SessionConfig& cfg) {
  if (now_ms < s.clock_ms) return reject(s, kClockRegression);

  Step out{s, {}};
  auto& st = out.state;
  st.clock_ms = now_ms;
  if (st.dictating && st.last_speech_ms && now_ms - *st.last_speech_ms >= cfg.silence_gap_ms) {
    stop_dictation(st, out.effects);
  }
  std::erase_if(st.opacity_boost, [&](const auto& kv) { return kv.second <= now_ms; });
  return out;
}

std::optional<std::int64_t> next_deadline(const SessionState& s, const SessionConfig& cfg) {
  std::optional<std::int64_t> due;
  auto consider = [&](std::int64_t t) {
    if (!due || t < *due) due = t;
  };
  if (s.dictating && s.last_speech_ms) consider(*s.last_speech_ms + cfg.silence_gap_ms);
  for (const auto& [_, expiry] : s.opacity_boost) consider(expiry);
  return due;
}

RenderModel render(const SessionState& s, const SessionConfig& cfg) {
  RenderModel r;
  r.visible = s.visible;
  if (!s.visible) return r;

  auto boosted = [&](const std::string& name) { return s.opacity_boost.contains(name); };
  auto opacity = [&](bool b) { return b ? cfg.boosted_opacity : cfg.base_opacity; };

  const std::size_t n_notes = std::min({s.notifications.size(), cfg.max_notifications, cfg.window});
  r.notification_panel.assign(s.notifications.begin(), s.notifications.begin() + static_cast<std::ptrdiff_t>(n_notes));

  if (s.focused_contact) {
    r.chat_contact = s.focused_contact;
    if (auto it = s.history.find(*s.focused_contact); it != s.history.end()) {
      const auto& msgs = it->second;
      const std::size_t first = msgs.size() > cfg.window ? msgs.size() - cfg.window : 0;
      r.chat_panel.assign(msgs.begin() + static_cast<std::ptrdiff_t>(first), msgs.end());
    }
  }

  for (std::size_t i = s.scroll_offset; i < s.contacts.size() && r.contact_panel.size() < cfg.window; ++i) {
    const auto& c = s.contacts[i];
    r.contact_panel.push_back(RenderContact{c.name, c.unread_count, boosted(c.name), s.focused_contact == c.name});
  }

  r.input_panel.mode = s.dictating ? "dictation" : s.keyboard_open ? "keyboard" : "idle";
  r.input_panel.draft = s.draft;
  r.input_panel.focus = s.input_focus;

  r.notification_opacity = opacity(std::any_of(r.notification_panel.begin(), r.notification_panel.end(),
                                               [&](const Notification& n) { return boosted(n.sender); }));
  r.chat_opacity = opacity(r.chat_contact && boosted(*r.chat_contact));
  r.contact_opacity = opacity(std::any_of(r.contact_panel.begin(), r.contact_panel.end(),
                                          [](const RenderContact& c) { return c.boosted; }));
  return r;
}

Session::Session(SessionConfig cfg, std::span<const std::string> contacts, std::int64_t start_ms)
    : cfg_(std::move(cfg)), state_(make_session(contacts, start_ms)) {}

void Session::apply(Step step, std::int64_t now_ms, std::vector<Effect>& out) {
  state_ = std::move(step.state);
  for (auto& e : step.effects) {
    log_.push_back(LoggedEffect{now_ms, e});
    out.push_back(std::move(e));
  }
}

std::vector<Effect> Session::advance_to(std::int64_t now_ms) {
  std::vector<Effect> out;
  while (auto due = next_deadline(state_, cfg_)) {
    if (*due > now_ms) break;
    const std::int64_t at = std::max(*due, state_.clock_ms);
    apply(glassmsg::tick(state_, at, cfg_), at, out);
  }
  return out;
}

std::vector<Effect> Session::command(const Command& c, std::int64_t now_ms) {
  auto out = advance_to(now_ms);
  apply(handle_command(state_, c, now_ms, cfg_), now_ms, out);
  return out;
}

std::vector<Effect> Session::incoming(const Message& m, std::int64_t now_ms) {
  auto out = advance_to(now_ms);
  apply(handle_incoming(state_, m, now_ms, cfg_), now_ms, out);
  return out;
}

std::vector<Effect> Session::tick(std::int64_t now_ms) {
  auto out = advance_to(now_ms);
  apply(glassmsg::tick(state_, now_ms, cfg_), now_ms, out);
  return out;
}

std::vector<Effect> Session::utterance(std::string_view text, std::int64_t now_ms) {
  auto out = advance_to(now_ms);
  const auto names = state_.contact_names();
  apply(handle_command(state_, parse_utterance(text, state_.mode(), names), now_ms, cfg_), now_ms, out);
  return out;
}

std::vector<Effect> Session::ring(const RingEvent& e, std::int64_t now_ms) {
  auto out = advance_to(now_ms);
  const auto c = map_ring_event(e, RingContext{state_.visible, state_.keyboard_open}, cfg_.grammar);
  apply(handle_command(state_, c, now_ms, cfg_), now_ms, out);
  return out;
}

std::vector<Effect> Session::gesture(const GestureEvent& g, std::int64_t now_ms) {
  auto out = advance_to(now_ms);
  const auto c = map_gesture_event(g, GestureContext{state_.keyboard_open});
  apply(handle_command(state_, c, now_ms, cfg_), now_ms, out);
  return out;
}

std::vector<Effect> Session::keyboard_text(std::string_view text, std::int64_t now_ms) {
  auto out = advance_to(now_ms);
  if (!state_.keyboard_open) {
    apply(Step{state_, {effect::Error{"keyboard_closed"}}}, now_ms, out);
    return out;
  }
  apply(handle_command(state_, Command::append_transcript(std::string(text)), now_ms, cfg_), now_ms, out);
  return out;
}

}  // namespace glassmsg
