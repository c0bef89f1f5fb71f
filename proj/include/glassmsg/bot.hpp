#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "glassmsg/wire.hpp"

namespace glassmsg {

struct BotRule {
  // Case-insensitive substring of the incoming body, or "any".
  std::string trigger;
  std::vector<std::string> reply_bodies;
  std::int64_t delay_ms = 0;
  std::int64_t jitter_ms = 0;
};

struct BotScript {
  std::string name;
  std::vector<BotRule> rules;
  std::uint64_t rng_seed = 0;
};

struct ScheduledFrame {
  std::int64_t due_ms = 0;
  WireFrame frame;

  friend bool operator==(const ScheduledFrame&, const ScheduledFrame&) = default;
};

// Fires the first rule matching `incoming` and schedules its reply at
// now + delay + jitter, where both the jitter (uniform in [0, jitter_ms]) and
// the chosen reply body are pure functions of (rng_seed, incoming.seq).
// Frames addressed elsewhere, or matching no rule, yield nothing.
std::vector<ScheduledFrame> bot_step(const BotScript& script, const WireFrame& incoming, std::int64_t now_ms);

// Parses a JSON array of scripts. Scripts without "rng_seed" get `default_seed`.
// Throws std::invalid_argument describing the first invalid entry.
std::vector<BotScript> parse_bot_scripts(std::string_view json_text, std::uint64_t default_seed = 0);
std::vector<BotScript> load_bot_scripts(const std::filesystem::path& path, std::uint64_t default_seed = 0);

}  // namespace glassmsg
