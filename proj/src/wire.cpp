#include "glassmsg/wire.hpp"

#include <array>
#include <utility>

#include <nlohmann/json.hpp>

namespace glassmsg {
namespace {

using json = nlohmann::json;

constexpr std::array<std::pair<FrameType, std::string_view>, 10> kTypeNames{{
    {FrameType::Hello, "hello"},
    {FrameType::HelloAck, "hello_ack"},
    {FrameType::Msg, "msg"},
    {FrameType::Ack, "ack"},
    {FrameType::Notify, "notify"},
    {FrameType::HistoryReq, "history_req"},
    {FrameType::History, "history"},
    {FrameType::Err, "err"},
    {FrameType::Event, "event"},
    {FrameType::Render, "render"},
}};

std::string string_field(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return {};
  if (!it->is_string()) throw FrameError("bad_frame", std::string("field '") + key + "' must be a string");
  return it->get<std::string>();
}

std::int64_t int_field(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return 0;
  if (!it->is_number_integer()) throw FrameError("bad_frame", std::string("field '") + key + "' must be an integer");
  return it->get<std::int64_t>();
}

}  // namespace

std::string_view to_string(FrameType t) {
  for (const auto& [k, name] : kTypeNames) {
    if (k == t) return name;
  }
  return "?";
}

std::optional<FrameType> frame_type_from_string(std::string_view s) {
  for (const auto& [k, name] : kTypeNames) {
    if (name == s) return k;
  }
  return std::nullopt;
}

std::string encode(const WireFrame& f) {
  nlohmann::ordered_json j{
      {"v", f.v}, {"type", std::string(to_string(f.type))}, {"id", f.id}, {"from", f.from}, {"to", f.to},
      {"body", f.body}, {"ts", f.ts}, {"seq", f.seq},
  };
  std::string out = j.dump(-1, ' ', false, nlohmann::ordered_json::error_handler_t::replace);
  out.push_back('\n');
  return out;
}

WireFrame decode(std::string_view line) {
  if (!line.empty() && line.back() == '\n') line.remove_suffix(1);
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  if (line.size() > kMaxFrameBytes) throw FrameError("frame_too_large", "frame exceeds 64 KiB");

  json j = json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw FrameError("bad_frame", "not a JSON object");

  auto v = j.find("v");
  if (v == j.end() || !v->is_number_integer()) throw FrameError("bad_frame", "missing protocol version");
  if (v->get<std::int64_t>() != kProtocolVersion) throw FrameError("bad_frame", "unsupported protocol version");

  auto type = frame_type_from_string(string_field(j, "type"));
  if (!type) throw FrameError("bad_frame", "missing or unknown frame type");

  WireFrame f;
  f.v = kProtocolVersion;
  f.type = *type;
  f.id = string_field(j, "id");
  f.from = string_field(j, "from");
  f.to = string_field(j, "to");
  f.body = string_field(j, "body");
  f.ts = int_field(j, "ts");
  f.seq = int_field(j, "seq");
  return f;
}

WireFrame make_error_frame(std::string_view code, std::string_view ref_id) {
  WireFrame f;
  f.type = FrameType::Err;
  f.id = std::string(ref_id);
  f.body = std::string(code);
  return f;
}

}  // namespace glassmsg
