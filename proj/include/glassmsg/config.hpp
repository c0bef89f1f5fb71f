#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

namespace glassmsg {

struct Config {
  std::string host = "127.0.0.1";
  std::uint16_t port = 7870;
  std::uint16_t ws_port = 7871;
  std::string bots_path;
  std::string log_path;
  std::int64_t silence_gap_ms = 2000;
  std::uint64_t seed = 0;
  std::size_t history_depth = 50;

  friend bool operator==(const Config&, const Config&) = default;
};

// One source of settings; unset fields defer to the next source down.
struct ConfigLayer {
  std::optional<std::string> host;
  std::optional<std::uint16_t> port;
  std::optional<std::uint16_t> ws_port;
  std::optional<std::string> bots_path;
  std::optional<std::string> log_path;
  std::optional<std::int64_t> silence_gap_ms;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> history_depth;
};

// Parses a JSON object with Config's field names. Unknown keys are ignored.
// Throws std::invalid_argument on malformed input.
ConfigLayer parse_config_layer(std::string_view json_text);
ConfigLayer load_config_file(const std::filesystem::path& path);

// flags > file > defaults
Config resolve_config(const ConfigLayer& file, const ConfigLayer& flags);

}  // namespace glassmsg
