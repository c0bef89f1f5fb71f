#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "glassmsg/command.hpp"
#include "glassmsg/serialize.hpp"
#include "glassmsg/session.hpp"

namespace glassmsg {

struct TraceHeader {
  std::string session_id;
  std::int64_t silence_gap_ms = 2000;
  std::uint64_t seed = 0;
  std::vector<std::string> contacts;
  // Intended text of each sent message, in send order; drives error_rate.
  std::vector<std::string> references;
};

namespace trace_event {
struct Utterance {
  std::string text;
};
struct KeyboardText {
  std::string text;
};
struct Tick {};
}  // namespace trace_event

using TracePayload = std::variant<trace_event::Utterance, RingEvent, GestureEvent, trace_event::KeyboardText,
                                  Message, trace_event::Tick>;

struct TraceEvent {
  std::int64_t t_ms = 0;
  TracePayload payload;
};

struct InputTrace {
  TraceHeader header;
  std::vector<TraceEvent> events;
};

class TraceError : public std::runtime_error {
 public:
  TraceError(std::size_t index, const std::string& what) : std::runtime_error(what), index_(index) {}
  // 1-based line for parse errors, 0-based event index for ordering errors.
  std::size_t index() const { return index_; }

 private:
  std::size_t index_;
};

// JSONL: header object on the first non-blank line, then one event per line:
//   {"t":1000,"kind":"utterance","text":"show chat"}
//   {"t":1000,"kind":"ring","button":"center","hold_ms":1200}
//   {"t":1000,"kind":"gesture","gesture":"press","target":"contact","name":"Peter"}
//   {"t":1000,"kind":"keyboard_text","text":"ok"}
//   {"t":1000,"kind":"incoming","from":"Peter","body":"hi","id":"m1"}
//   {"t":1000,"kind":"tick"}
InputTrace parse_trace(std::string_view jsonl);

// The event object without its "t" field; also the body of browser event frames.
TracePayload payload_from_json(const json& j);
json to_json(const TracePayload& p);

InputTrace load_trace(const std::filesystem::path& path);
std::string write_trace(const InputTrace& trace);

}  // namespace glassmsg
