#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "glassmsg/wire.hpp"

namespace glassmsg {

// Unordered pair of participant names, e.g. "Peter|self".
std::string conversation_key(std::string_view a, std::string_view b);

struct RecoveredState {
  std::map<std::string, std::vector<WireFrame>> histories;  // by conversation key
  std::map<std::string, std::int64_t> next_seq;              // by conversation key
  std::set<std::string> participants;
  std::size_t warnings = 0;      // truncated trailing records dropped
  std::uintmax_t valid_bytes = 0;  // length of the well-formed prefix

  friend bool operator==(const RecoveredState&, const RecoveredState&) = default;
};

class RecoveryError : public std::runtime_error {
 public:
  RecoveryError(std::size_t line, const std::string& what)
      : std::runtime_error("log line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Rebuilds histories and sequence counters from a JSONL log of delivered msg
// frames. A final line without its terminator that fails to parse is a torn
// write: it is dropped and counted in `warnings`. Any other bad line, or a
// sequence number out of order for its conversation, throws RecoveryError.
RecoveredState recover(std::string_view log_text);
RecoveredState recover_file(const std::filesystem::path& path);

// Append-only writer. Each record is flushed before append() returns.
class ConversationLog {
 public:
  ConversationLog() = default;
  // Truncates the file to `keep_bytes` first when given, dropping a torn tail.
  explicit ConversationLog(const std::filesystem::path& path, std::optional<std::uintmax_t> keep_bytes = std::nullopt);

  bool is_open() const { return out_.is_open(); }
  void append(const WireFrame& f);

 private:
  std::ofstream out_;
};

}  // namespace glassmsg
