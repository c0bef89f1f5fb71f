#include "glassmsg/serialize.hpp"

#include <istream>
#include <sstream>
#include <stdexcept>

namespace glassmsg {
namespace {

InputFocus focus_from_string(std::string_view s) {
  if (s == "keyboard") return InputFocus::Keyboard;
  if (s == "send") return InputFocus::Send;
  return InputFocus::Voice;
}

}  // namespace

json to_json(const Message& m) {
  return json{{"id", m.id}, {"sender", m.sender}, {"recipient", m.recipient}, {"body", m.body}, {"ts_ms", m.ts_ms}};
}

Message message_from_json(const json& j) {
  return Message{j.value("id", ""), j.value("sender", ""), j.value("recipient", ""), j.value("body", ""),
                 j.value("ts_ms", std::int64_t{0})};
}

json to_json(const Notification& n) {
  return json{{"id", n.id}, {"sender", n.sender}, {"arrived_ms", n.arrived_ms}, {"preview", n.preview}};
}

Notification notification_from_json(const json& j) {
  return Notification{j.value("id", std::int64_t{0}), j.value("sender", ""), j.value("arrived_ms", std::int64_t{0}),
                      j.value("preview", "")};
}

json to_json(const Effect& e) {
  struct Data {
    json operator()(const effect::SendMessage& x) const { return json{{"message", to_json(x.message)}}; }
    json operator()(const effect::Beep&) const { return json::object(); }
    json operator()(const effect::ShowNotification& x) const { return json{{"notification", to_json(x.notification)}}; }
    json operator()(const effect::StartDictationFeedback&) const { return json::object(); }
    json operator()(const effect::StopDictationFeedback&) const { return json::object(); }
    json operator()(const effect::OpacityBoost& x) const { return json{{"contact", x.contact}, {"until_ms", x.until_ms}}; }
    json operator()(const effect::DraftUpdated& x) const {
      return json{{"source", std::string(to_string(x.source))}, {"draft", x.draft}};
    }
    json operator()(const effect::Error& x) const { return json{{"code", x.code}}; }
  };
  return json{{"effect", std::string(effect_name(e))}, {"data", std::visit(Data{}, e)}};
}

Effect effect_from_json(const json& j) {
  const std::string name = j.at("effect").get<std::string>();
  const json data = j.value("data", json::object());
  if (name == "SendMessage") return effect::SendMessage{message_from_json(data.at("message"))};
  if (name == "Beep") return effect::Beep{};
  if (name == "ShowNotification") return effect::ShowNotification{notification_from_json(data.at("notification"))};
  if (name == "StartDictationFeedback") return effect::StartDictationFeedback{};
  if (name == "StopDictationFeedback") return effect::StopDictationFeedback{};
  if (name == "OpacityBoost") {
    return effect::OpacityBoost{data.value("contact", ""), data.value("until_ms", std::int64_t{0})};
  }
  if (name == "DraftUpdated") {
    return effect::DraftUpdated{focus_from_string(data.value("source", "voice")), data.value("draft", "")};
  }
  if (name == "Error") return effect::Error{data.value("code", "")};
  throw std::invalid_argument("unknown effect: " + name);
}

json to_json(const RenderModel& r) {
  json notes = json::array();
  for (const auto& n : r.notification_panel) notes.push_back(to_json(n));
  json chat = json::array();
  for (const auto& m : r.chat_panel) chat.push_back(to_json(m));
  json contacts = json::array();
  for (const auto& c : r.contact_panel) {
    contacts.push_back(
        json{{"name", c.name}, {"unread_count", c.unread_count}, {"boosted", c.boosted}, {"focused", c.focused}});
  }
  return json{
      {"visible", r.visible},
      {"canvas", {{"width", RenderModel::kCanvasWidth}, {"height", RenderModel::kCanvasHeight}}},
      {"notification_panel",
       {{"anchor", RenderModel::kNotificationAnchor}, {"opacity", r.notification_opacity}, {"items", notes}}},
      {"chat_panel",
       {{"anchor", RenderModel::kChatAnchor},
        {"opacity", r.chat_opacity},
        {"contact", r.chat_contact ? json(*r.chat_contact) : json(nullptr)},
        {"items", chat}}},
      {"contact_panel", {{"anchor", RenderModel::kContactAnchor}, {"opacity", r.contact_opacity}, {"items", contacts}}},
      {"input_panel",
       {{"anchor", RenderModel::kInputAnchor},
        {"mode", r.input_panel.mode},
        {"draft", r.input_panel.draft},
        {"focus", std::string(to_string(r.input_panel.focus))}}},
  };
}

json to_json(const SessionState& s) {
  json contacts = json::array();
  for (const auto& c : s.contacts) {
    contacts.push_back(json{{"name", c.name}, {"last_activity_ms", c.last_activity_ms}, {"unread_count", c.unread_count}});
  }
  json history = json::object();
  for (const auto& [name, msgs] : s.history) {
    json arr = json::array();
    for (const auto& m : msgs) arr.push_back(to_json(m));
    history[name] = std::move(arr);
  }
  json notes = json::array();
  for (const auto& n : s.notifications) notes.push_back(to_json(n));
  json boosts = json::object();
  for (const auto& [name, until] : s.opacity_boost) boosts[name] = until;

  return json{
      {"visible", s.visible},
      {"focused_contact", s.focused_contact ? json(*s.focused_contact) : json(nullptr)},
      {"scroll_offset", s.scroll_offset},
      {"input_focus", std::string(to_string(s.input_focus))},
      {"dictating", s.dictating},
      {"last_speech_ms", s.last_speech_ms ? json(*s.last_speech_ms) : json(nullptr)},
      {"keyboard_open", s.keyboard_open},
      {"draft", s.draft},
      {"contacts", contacts},
      {"history", history},
      {"notifications", notes},
      {"opacity_boost", boosts},
      {"clock_ms", s.clock_ms},
  };
}

std::string effect_log_line(const LoggedEffect& e) {
  json j = to_json(e.effect);
  nlohmann::ordered_json line{{"t", e.t}, {"effect", j["effect"]}, {"data", j["data"]}};
  return line.dump(-1, ' ', false, json::error_handler_t::replace);
}

LoggedEffect parse_effect_log_line(std::string_view line) {
  const json j = json::parse(line);
  return LoggedEffect{j.at("t").get<std::int64_t>(), effect_from_json(j)};
}

std::string write_effect_log(const EffectLog& log) {
  std::string out;
  for (const auto& e : log) {
    out += effect_log_line(e);
    out.push_back('\n');
  }
  return out;
}

EffectLog read_effect_log(std::istream& in) {
  EffectLog log;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    log.push_back(parse_effect_log_line(line));
  }
  return log;
}

EffectLog read_effect_log(std::string_view text) {
  std::istringstream in{std::string(text)};
  return read_effect_log(in);
}

}  // namespace glassmsg
