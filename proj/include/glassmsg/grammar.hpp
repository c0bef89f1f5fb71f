#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>

#include "glassmsg/command.hpp"

namespace glassmsg {

struct GrammarConfig {
  // A ring hold at least this long counts as a long press.
  std::int64_t hold_threshold_ms = 1000;
};

struct RingContext {
  bool visible = false;
  bool keyboard_open = false;
};

struct GestureContext {
  bool keyboard_open = false;
};

/// Interprets one recognized utterance.
///
/// In command mode the trimmed, case-folded text is matched against the fixed
/// voice phrases, then "text <name>", then a bare contact name. Names must
/// match exactly (ignoring ASCII case and runs of whitespace); a name shared
/// by two contacts is unresolvable and yields NoCommand. In dictation mode
/// every non-blank utterance becomes AppendTranscript. Never throws.
Command parse_utterance(std::string_view text, InterpreterMode mode, std::span<const std::string> contacts);

Command map_ring_event(const RingEvent& e, RingContext ctx, const GrammarConfig& cfg = {});

Command map_gesture_event(const GestureEvent& g, GestureContext ctx);

// Lower-cases ASCII, trims surrounding whitespace and collapses internal
// whitespace runs to one space. Non-ASCII bytes pass through unchanged.
std::string normalize_phrase(std::string_view text);

}  // namespace glassmsg
