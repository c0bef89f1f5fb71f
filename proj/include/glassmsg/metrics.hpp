#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <boost/rational.hpp>

#include "glassmsg/serialize.hpp"
#include "glassmsg/session.hpp"
#include "glassmsg/trace.hpp"

namespace glassmsg {

using Rational = boost::rational<std::int64_t>;

struct ResponseTimes {
  std::vector<std::int64_t> durations_ms;
  std::size_t unanswered = 0;

  friend bool operator==(const ResponseTimes&, const ResponseTimes&) = default;
};

// Matches every ShowNotification to the first later SendMessage addressed to
// its sender. Each send answers at most one notification: the earliest one
// still pending for that sender.
ResponseTimes response_time(const EffectLog& log);

// Words per minute with five characters per word. A message's composition
// time runs from the first StartDictationFeedback or keyboard DraftUpdated
// after the previous send up to its SendMessage. Absent when nothing was sent
// or the total composition time is zero.
std::optional<Rational> entry_speed(const EffectLog& log);

// Levenshtein distance over Unicode code points.
std::size_t edit_distance(std::u32string_view a, std::u32string_view b);

// Minimum string distance normalized by the longer string's length, over
// code points. Throws std::invalid_argument for an empty reference.
Rational error_rate(std::string_view produced, std::string_view reference);

struct MetricsReport {
  std::string session_id;
  std::vector<std::int64_t> response_times_ms;
  std::size_t unanswered = 0;
  std::optional<Rational> entry_speed_wpm;
  // Aggregate over sent messages paired with header references:
  // sum of distances / sum of longer lengths.
  std::optional<Rational> error_rate;
  std::int64_t messages_sent = 0;

  friend bool operator==(const MetricsReport&, const MetricsReport&) = default;
};

MetricsReport compute_report(const EffectLog& log, const TraceHeader& header);

json to_json(const MetricsReport& r);
std::string format_report_table(const MetricsReport& r);

struct ReplayResult {
  SessionState final_state;
  EffectLog log;
  MetricsReport report;
};

// Feeds every event, in order, into a fresh session configured from the
// header. Throws TraceError carrying the 0-based index of the first event
// whose t_ms is earlier than its predecessor's.
ReplayResult replay(const InputTrace& trace, std::optional<std::int64_t> silence_gap_override = std::nullopt);

// Applies one trace payload to a live session.
std::vector<Effect> dispatch(Session& session, const TracePayload& payload, std::int64_t now_ms);

}  // namespace glassmsg
