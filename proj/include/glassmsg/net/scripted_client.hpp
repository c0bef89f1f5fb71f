#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "glassmsg/metrics.hpp"
#include "glassmsg/trace.hpp"
#include "glassmsg/wire.hpp"

namespace glassmsg::net {

struct ClientOptions {
  std::string host = "127.0.0.1";
  std::uint16_t port = 7870;
  std::string name = "self";
  // Trace milliseconds per wall-clock millisecond.
  double speed = 1.0;
  // Wall-clock time to keep listening after the last trace event.
  std::chrono::milliseconds linger{1000};
  std::optional<std::int64_t> silence_gap_ms;
};

struct ClientResult {
  SessionState final_state;
  EffectLog log;
  MetricsReport report;
  std::vector<WireFrame> received;
};

// Connects, registers as `opts.name` and plays the trace's user-side events
// in real time (scaled by `speed`) through a local session engine. Messages
// the engine sends go to the server; incoming events in the trace are skipped
// because incoming traffic comes from the server's bots and peers instead.
// Throws boost::system::system_error when the server is unreachable and
// std::runtime_error when registration is refused.
ClientResult run_scripted_client(const ClientOptions& opts, const InputTrace& trace);

}  // namespace glassmsg::net
