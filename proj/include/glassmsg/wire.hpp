#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace glassmsg {

inline constexpr int kProtocolVersion = 1;
inline constexpr std::size_t kMaxFrameBytes = 64 * 1024;

enum class FrameType {
  Hello,
  HelloAck,
  Msg,
  Ack,
  Notify,
  HistoryReq,
  History,
  Err,
  // Browser-session only: raw input events in, render models out.
  Event,
  Render,
};

std::string_view to_string(FrameType t);
std::optional<FrameType> frame_type_from_string(std::string_view s);

struct WireFrame {
  int v = kProtocolVersion;
  FrameType type = FrameType::Msg;
  std::string id;
  std::string from;
  std::string to;
  std::string body;
  std::int64_t ts = 0;
  std::int64_t seq = 0;

  friend bool operator==(const WireFrame&, const WireFrame&) = default;
};

class FrameError : public std::runtime_error {
 public:
  FrameError(std::string code, const std::string& detail) : std::runtime_error(detail), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

// One line of UTF-8 JSON terminated by '\n'. Invalid UTF-8 in string fields
// is replaced with U+FFFD rather than rejected.
std::string encode(const WireFrame& f);

// Accepts a line with or without its terminator. Unknown fields are ignored;
// `v` and `type` are mandatory. Throws FrameError("frame_too_large") for lines
// above kMaxFrameBytes and FrameError("bad_frame") for anything unparsable.
WireFrame decode(std::string_view line);

WireFrame make_error_frame(std::string_view code, std::string_view ref_id = {});

}  // namespace glassmsg
