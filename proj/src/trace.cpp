#include "glassmsg/trace.hpp"

#include <fstream>
#include <sstream>

namespace glassmsg {
namespace {

template <typename... Fs>
struct Overloaded : Fs... {
  using Fs::operator()...;
};
template <typename... Fs>
Overloaded(Fs...) -> Overloaded<Fs...>;

RingEvent ring_from_json(const json& j) {
  auto button = ring_button_from_string(j.value("button", ""));
  if (!button) throw std::invalid_argument("unknown ring button");
  const auto hold = j.value("hold_ms", std::int64_t{0});
  if (hold < 0) throw std::invalid_argument("negative hold_ms");
  return RingEvent{*button, hold};
}

GestureEvent gesture_from_json(const json& j) {
  const std::string gesture = j.value("gesture", "press");
  if (gesture == "swipe_up") return GestureEvent::swipe_up();
  if (gesture == "swipe_down") return GestureEvent::swipe_down();
  if (gesture != "press") throw std::invalid_argument("unknown gesture: " + gesture);

  auto target = gesture_target_from_string(j.value("target", "anywhere"));
  if (!target) throw std::invalid_argument("unknown gesture target");
  GestureEvent g = GestureEvent::press(*target);
  g.notification_id = j.value("id", std::int64_t{0});
  g.contact = j.value("name", "");
  return g;
}

}  // namespace

TracePayload payload_from_json(const json& j) {
  const std::string kind = j.value("kind", "");
  if (kind == "utterance") return trace_event::Utterance{j.value("text", "")};
  if (kind == "ring") return ring_from_json(j);
  if (kind == "gesture") return gesture_from_json(j);
  if (kind == "keyboard_text") return trace_event::KeyboardText{j.value("text", "")};
  if (kind == "incoming") {
    Message m;
    m.id = j.value("id", "");
    m.sender = j.value("from", "");
    m.recipient = j.value("to", "self");
    m.body = j.value("body", "");
    m.ts_ms = j.value("ts", std::int64_t{0});
    if (m.sender.empty()) throw std::invalid_argument("incoming event without sender");
    return m;
  }
  if (kind == "tick") return trace_event::Tick{};
  throw std::invalid_argument("unknown event kind: '" + kind + "'");
}

json to_json(const TracePayload& p) {
  return std::visit(
      Overloaded{
          [](const trace_event::Utterance& u) { return json{{"kind", "utterance"}, {"text", u.text}}; },
          [](const RingEvent& r) {
            return json{{"kind", "ring"}, {"button", std::string(to_string(r.button))}, {"hold_ms", r.hold_ms}};
          },
          [](const GestureEvent& g) {
            switch (g.kind) {
              case GestureKind::SwipeUp:
                return json{{"kind", "gesture"}, {"gesture", "swipe_up"}};
              case GestureKind::SwipeDown:
                return json{{"kind", "gesture"}, {"gesture", "swipe_down"}};
              case GestureKind::Press:
                break;
            }
            json j{{"kind", "gesture"}, {"gesture", "press"}, {"target", std::string(to_string(g.target))}};
            if (g.target == GestureTarget::Notification) j["id"] = g.notification_id;
            if (g.target == GestureTarget::Contact) j["name"] = g.contact;
            return j;
          },
          [](const trace_event::KeyboardText& k) { return json{{"kind", "keyboard_text"}, {"text", k.text}}; },
          [](const Message& m) {
            return json{{"kind", "incoming"}, {"id", m.id},       {"from", m.sender},
                        {"to", m.recipient},  {"body", m.body},   {"ts", m.ts_ms}};
          },
          [](const trace_event::Tick&) { return json{{"kind", "tick"}}; },
      },
      p);
}

InputTrace parse_trace(std::string_view text) {
  InputTrace trace;
  bool have_header = false;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    const std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;

    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw TraceError(line_no, "line " + std::to_string(line_no) + ": not a JSON object");

    try {
      if (!have_header) {
        if (j.contains("kind")) throw std::invalid_argument("first line must be the trace header");
        auto& h = trace.header;
        h.session_id = j.value("session_id", "");
        h.silence_gap_ms = j.value("silence_gap_ms", std::int64_t{2000});
        h.seed = j.value("seed", std::uint64_t{0});
        h.contacts = j.value("contacts", std::vector<std::string>{});
        h.references = j.value("references", std::vector<std::string>{});
        if (h.silence_gap_ms < 0) throw std::invalid_argument("negative silence_gap_ms");
        have_header = true;
        continue;
      }
      if (!j.contains("t") || !j["t"].is_number_integer()) throw std::invalid_argument("event without integer t");
      TraceEvent ev{j["t"].get<std::int64_t>(), payload_from_json(j)};
      if (auto* m = std::get_if<Message>(&ev.payload)) {
        if (m->id.empty()) m->id = "trace-" + std::to_string(trace.events.size());
        if (!j.contains("ts")) m->ts_ms = ev.t_ms;
      }
      trace.events.push_back(std::move(ev));
    } catch (const TraceError&) {
      throw;
    } catch (const std::exception& e) {
      throw TraceError(line_no, "line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (!have_header) throw TraceError(0, "trace has no header line");
  return trace;
}

InputTrace load_trace(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw TraceError(0, "cannot open trace: " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_trace(ss.str());
}

std::string write_trace(const InputTrace& trace) {
  const auto& h = trace.header;
  json header{{"session_id", h.session_id}, {"silence_gap_ms", h.silence_gap_ms}, {"seed", h.seed},
              {"contacts", h.contacts},     {"references", h.references}};
  std::string out = header.dump(-1, ' ', false, json::error_handler_t::replace) + "\n";
  for (const auto& ev : trace.events) {
    json j{{"t", ev.t_ms}};
    j.update(to_json(ev.payload));
    out += j.dump(-1, ' ', false, json::error_handler_t::replace);
    out.push_back('\n');
  }
  return out;
}

}  // namespace glassmsg
