#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "glassmsg/session.hpp"

namespace glassmsg {

using json = nlohmann::json;

json to_json(const Message& m);
Message message_from_json(const json& j);

json to_json(const Notification& n);
Notification notification_from_json(const json& j);

// {"effect": <name>, "data": {...}}
json to_json(const Effect& e);
Effect effect_from_json(const json& j);

json to_json(const RenderModel& r);
json to_json(const SessionState& s);

// One effect log record: {"t": ms, "effect": name, "data": {...}} on a single line.
std::string effect_log_line(const LoggedEffect& e);
LoggedEffect parse_effect_log_line(std::string_view line);

std::string write_effect_log(const EffectLog& log);
EffectLog read_effect_log(std::istream& in);
EffectLog read_effect_log(std::string_view text);

}  // namespace glassmsg
