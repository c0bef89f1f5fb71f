#include "glassmsg/config.hpp"

#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <type_traits>

#include <nlohmann/json.hpp>

namespace glassmsg {
namespace {

using json = nlohmann::json;

template <typename T>
void read_field(const json& j, const char* key, std::optional<T>& out) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return;
  const auto bad = [&] { return std::invalid_argument(std::string("config: bad value for '") + key + "'"); };
  if constexpr (std::is_integral_v<T>) {
    // Negative values are never meaningful here, and nothing may wrap.
    if (it->is_number_unsigned()) {
      const auto v = it->get<std::uint64_t>();
      if (v > static_cast<std::uint64_t>(std::numeric_limits<T>::max())) throw bad();
      out = static_cast<T>(v);
      return;
    }
    throw bad();
  } else {
    if (!it->is_string()) throw bad();
    out = it->get<T>();
  }
}

template <typename T>
void overlay(T& dst, const std::optional<T>& src) {
  if (src) dst = *src;
}

}  // namespace

ConfigLayer parse_config_layer(std::string_view json_text) {
  json j = json::parse(json_text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw std::invalid_argument("config: expected a JSON object");
  ConfigLayer layer;
  read_field(j, "host", layer.host);
  read_field(j, "port", layer.port);
  read_field(j, "ws_port", layer.ws_port);
  read_field(j, "bots_path", layer.bots_path);
  read_field(j, "log_path", layer.log_path);
  read_field(j, "silence_gap_ms", layer.silence_gap_ms);
  read_field(j, "seed", layer.seed);
  read_field(j, "history_depth", layer.history_depth);
  return layer;
}

ConfigLayer load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_layer(ss.str());
}

Config resolve_config(const ConfigLayer& file, const ConfigLayer& flags) {
  Config c;
  for (const ConfigLayer* layer : {&file, &flags}) {
    overlay(c.host, layer->host);
    overlay(c.port, layer->port);
    overlay(c.ws_port, layer->ws_port);
    overlay(c.bots_path, layer->bots_path);
    overlay(c.log_path, layer->log_path);
    overlay(c.silence_gap_ms, layer->silence_gap_ms);
    overlay(c.seed, layer->seed);
    overlay(c.history_depth, layer->history_depth);
  }
  return c;
}

}  // namespace glassmsg
