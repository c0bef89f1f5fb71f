#include "glassmsg/metrics.hpp"

#include <algorithm>
#include <deque>
#include <iomanip>
#include <map>
#include <numeric>
#include <sstream>

#include "glassmsg/utf8.hpp"

namespace glassmsg {
namespace {

template <typename... Fs>
struct Overloaded : Fs... {
  using Fs::operator()...;
};
template <typename... Fs>
Overloaded(Fs...) -> Overloaded<Fs...>;

json rational_json(const std::optional<Rational>& r) {
  if (!r) return nullptr;
  return json{{"num", r->numerator()},
              {"den", r->denominator()},
              {"value", boost::rational_cast<double>(*r)}};
}

std::string rational_text(const std::optional<Rational>& r, int precision) {
  if (!r) return "n/a";
  std::ostringstream os;
  os << std::fixed << std::setprecision(precision) << boost::rational_cast<double>(*r);
  return os.str();
}

std::vector<const effect::SendMessage*> sends_of(const EffectLog& log) {
  std::vector<const effect::SendMessage*> out;
  for (const auto& e : log) {
    if (const auto* s = std::get_if<effect::SendMessage>(&e.effect)) out.push_back(s);
  }
  return out;
}

}  // namespace

ResponseTimes response_time(const EffectLog& log) {
  ResponseTimes out;
  std::map<std::string, std::deque<std::int64_t>> pending;
  for (const auto& e : log) {
    if (const auto* n = std::get_if<effect::ShowNotification>(&e.effect)) {
      pending[n->notification.sender].push_back(e.t);
    } else if (const auto* s = std::get_if<effect::SendMessage>(&e.effect)) {
      auto it = pending.find(s->message.recipient);
      if (it == pending.end() || it->second.empty()) continue;
      out.durations_ms.push_back(e.t - it->second.front());
      it->second.pop_front();
    }
  }
  for (const auto& [_, q] : pending) out.unanswered += q.size();
  return out;
}

std::optional<Rational> entry_speed(const EffectLog& log) {
  std::int64_t chars = 0;
  std::int64_t total_ms = 0;
  std::size_t sent = 0;
  std::optional<std::int64_t> started;
  for (const auto& e : log) {
    std::visit(Overloaded{
                   [&](const effect::StartDictationFeedback&) {
                     if (!started) started = e.t;
                   },
                   [&](const effect::DraftUpdated& d) {
                     if (!started && d.source == InputFocus::Keyboard) started = e.t;
                   },
                   [&](const effect::SendMessage& s) {
                     ++sent;
                     chars += static_cast<std::int64_t>(utf8::length(s.message.body));
                     if (started) total_ms += e.t - *started;
                     started.reset();
                   },
                   [](const auto&) {},
               },
               e.effect);
  }
  if (sent == 0 || total_ms <= 0) return std::nullopt;
  // (chars / 5) / (ms / 60000)
  return Rational(chars * 12000, total_ms);
}

std::size_t edit_distance(std::u32string_view a, std::u32string_view b) {
  if (a.size() < b.size()) std::swap(a, b);
  std::vector<std::size_t> row(b.size() + 1);
  std::iota(row.begin(), row.end(), std::size_t{0});
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = std::min({up + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[b.size()];
}

Rational error_rate(std::string_view produced, std::string_view reference) {
  if (reference.empty()) throw std::invalid_argument("error_rate: empty reference text");
  const auto p = utf8::decode(produced);
  const auto r = utf8::decode(reference);
  const auto longest = static_cast<std::int64_t>(std::max(p.size(), r.size()));
  return Rational(static_cast<std::int64_t>(edit_distance(p, r)), longest);
}

MetricsReport compute_report(const EffectLog& log, const TraceHeader& header) {
  MetricsReport r;
  r.session_id = header.session_id;
  auto rt = response_time(log);
  r.response_times_ms = std::move(rt.durations_ms);
  r.unanswered = rt.unanswered;
  r.entry_speed_wpm = entry_speed(log);

  const auto sends = sends_of(log);
  r.messages_sent = static_cast<std::int64_t>(sends.size());

  std::int64_t distance = 0;
  std::int64_t longest = 0;
  const std::size_t pairs = std::min(sends.size(), header.references.size());
  for (std::size_t i = 0; i < pairs; ++i) {
    if (header.references[i].empty()) continue;
    const auto p = utf8::decode(sends[i]->message.body);
    const auto ref = utf8::decode(header.references[i]);
    distance += static_cast<std::int64_t>(edit_distance(p, ref));
    longest += static_cast<std::int64_t>(std::max(p.size(), ref.size()));
  }
  if (longest > 0) r.error_rate = Rational(distance, longest);
  return r;
}

json to_json(const MetricsReport& r) {
  return json{
      {"session_id", r.session_id},
      {"messages_sent", r.messages_sent},
      {"response_times_ms", r.response_times_ms},
      {"unanswered", r.unanswered},
      {"entry_speed_wpm", rational_json(r.entry_speed_wpm)},
      {"error_rate", rational_json(r.error_rate)},
  };
}

std::string format_report_table(const MetricsReport& r) {
  std::ostringstream os;
  auto row = [&](std::string_view k, const std::string& v) { os << std::left << std::setw(22) << k << v << '\n'; };
  std::string times;
  for (std::size_t i = 0; i < r.response_times_ms.size(); ++i) {
    if (i) times += ", ";
    times += std::to_string(r.response_times_ms[i]);
  }
  row("session", r.session_id.empty() ? "-" : r.session_id);
  row("messages sent", std::to_string(r.messages_sent));
  row("response times (ms)", times.empty() ? "-" : times);
  row("unanswered", std::to_string(r.unanswered));
  row("entry speed (wpm)", rational_text(r.entry_speed_wpm, 2));
  row("error rate", rational_text(r.error_rate, 4));
  return os.str();
}

std::vector<Effect> dispatch(Session& session, const TracePayload& payload, std::int64_t now_ms) {
  return std::visit(Overloaded{
                        [&](const trace_event::Utterance& u) { return session.utterance(u.text, now_ms); },
                        [&](const RingEvent& r) { return session.ring(r, now_ms); },
                        [&](const GestureEvent& g) { return session.gesture(g, now_ms); },
                        [&](const trace_event::KeyboardText& k) { return session.keyboard_text(k.text, now_ms); },
                        [&](const Message& m) { return session.incoming(m, now_ms); },
                        [&](const trace_event::Tick&) { return session.tick(now_ms); },
                    },
                    payload);
}

ReplayResult replay(const InputTrace& trace, std::optional<std::int64_t> silence_gap_override) {
  for (std::size_t i = 1; i < trace.events.size(); ++i) {
    if (trace.events[i].t_ms < trace.events[i - 1].t_ms) {
      throw TraceError(i, "event " + std::to_string(i) + " is earlier than its predecessor");
    }
  }
  if (!trace.events.empty() && trace.events.front().t_ms < 0) throw TraceError(0, "negative event time");

  SessionConfig cfg;
  cfg.silence_gap_ms = silence_gap_override.value_or(trace.header.silence_gap_ms);
  Session session(cfg, trace.header.contacts, 0);
  for (const auto& ev : trace.events) dispatch(session, ev.payload, ev.t_ms);

  ReplayResult out{session.state(), session.log(), {}};
  out.report = compute_report(out.log, trace.header);
  return out;
}

}  // namespace glassmsg
