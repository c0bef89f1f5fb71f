#include "glassmsg/bot.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace glassmsg {
namespace {

using json = nlohmann::json;

char lower(char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c; }

bool contains_ci(std::string_view haystack, std::string_view needle) {
  auto it = std::search(haystack.begin(), haystack.end(), needle.begin(), needle.end(),
                        [](char a, char b) { return lower(a) == lower(b); });
  return it != haystack.end();
}

bool matches(const BotRule& rule, std::string_view body) {
  return rule.trigger == "any" || contains_ci(body, rule.trigger);
}

std::mt19937_64 engine_for(std::uint64_t seed, std::int64_t seq) {
  const auto s = static_cast<std::uint64_t>(seq);
  std::seed_seq sseq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                     static_cast<std::uint32_t>(s), static_cast<std::uint32_t>(s >> 32)};
  return std::mt19937_64(sseq);
}

BotScript script_from_json(const json& j, std::uint64_t default_seed, std::size_t index) {
  auto fail = [&](const std::string& what) {
    throw std::invalid_argument("bot script " + std::to_string(index) + ": " + what);
  };
  if (!j.is_object()) fail("expected an object");

  BotScript s;
  s.name = j.value("name", "");
  if (s.name.empty()) fail("missing name");
  s.rng_seed = j.contains("rng_seed") ? j.at("rng_seed").get<std::uint64_t>() : default_seed;

  for (const auto& r : j.value("rules", json::array())) {
    BotRule rule;
    rule.trigger = r.value("trigger", "");
    rule.reply_bodies = r.value("reply_bodies", std::vector<std::string>{});
    rule.delay_ms = r.value("delay_ms", std::int64_t{0});
    rule.jitter_ms = r.value("jitter_ms", std::int64_t{0});
    if (rule.trigger.empty()) fail("rule without trigger");
    if (rule.reply_bodies.empty()) fail("rule '" + rule.trigger + "' has no reply_bodies");
    if (std::any_of(rule.reply_bodies.begin(), rule.reply_bodies.end(), [](const auto& b) { return b.empty(); })) {
      fail("rule '" + rule.trigger + "' has an empty reply body");
    }
    if (rule.delay_ms < 0 || rule.jitter_ms < 0) fail("negative delay or jitter");
    s.rules.push_back(std::move(rule));
  }
  return s;
}

}  // namespace

std::vector<ScheduledFrame> bot_step(const BotScript& script, const WireFrame& incoming, std::int64_t now_ms) {
  if (incoming.type != FrameType::Msg || incoming.to != script.name) return {};

  auto rule = std::find_if(script.rules.begin(), script.rules.end(),
                           [&](const BotRule& r) { return matches(r, incoming.body); });
  if (rule == script.rules.end()) return {};

  auto rng = engine_for(script.rng_seed, incoming.seq);
  const std::uint64_t pick = rng();
  const std::uint64_t jitter_draw = rng();
  const std::int64_t jitter =
      rule->jitter_ms > 0 ? static_cast<std::int64_t>(jitter_draw % static_cast<std::uint64_t>(rule->jitter_ms + 1)) : 0;

  WireFrame reply;
  reply.type = FrameType::Msg;
  reply.from = script.name;
  reply.to = incoming.from;
  reply.body = rule->reply_bodies[pick % rule->reply_bodies.size()];
  return {ScheduledFrame{now_ms + rule->delay_ms + jitter, std::move(reply)}};
}

std::vector<BotScript> parse_bot_scripts(std::string_view json_text, std::uint64_t default_seed) {
  json doc = json::parse(json_text, nullptr, false);
  if (doc.is_discarded()) throw std::invalid_argument("bot scripts: not valid JSON");
  if (doc.is_object()) doc = json::array({doc});
  if (!doc.is_array()) throw std::invalid_argument("bot scripts: expected an array of scripts");

  std::vector<BotScript> out;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    try {
      out.push_back(script_from_json(doc[i], default_seed, i));
    } catch (const json::exception& e) {
      throw std::invalid_argument("bot script " + std::to_string(i) + ": " + e.what());
    }
    for (std::size_t k = 0; k + 1 < out.size(); ++k) {
      if (out[k].name == out.back().name) throw std::invalid_argument("duplicate bot name: " + out.back().name);
    }
  }
  return out;
}

std::vector<BotScript> load_bot_scripts(const std::filesystem::path& path, std::uint64_t default_seed) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open bot scripts: " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_bot_scripts(ss.str(), default_seed);
}

}  // namespace glassmsg
