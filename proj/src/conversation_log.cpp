#include "glassmsg/conversation_log.hpp"

#include <sstream>

namespace glassmsg {

std::string conversation_key(std::string_view a, std::string_view b) {
  if (b < a) std::swap(a, b);
  std::string key(a);
  key.push_back('|');
  key.append(b);
  return key;
}

RecoveredState recover(std::string_view text) {
  RecoveredState st;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < text.size()) {
    ++line_no;
    const std::size_t nl = text.find('\n', pos);
    const bool terminated = nl != std::string_view::npos;
    const std::size_t end = terminated ? nl : text.size();
    const std::string_view line = text.substr(pos, end - pos);
    const std::size_t next = terminated ? nl + 1 : text.size();

    if (line.empty()) {
      pos = next;
      st.valid_bytes = pos;
      continue;
    }

    WireFrame f;
    try {
      f = decode(line);
    } catch (const FrameError& e) {
      if (!terminated) {
        ++st.warnings;
        break;
      }
      throw RecoveryError(line_no, e.what());
    }
    if (f.type != FrameType::Msg) throw RecoveryError(line_no, "expected a msg frame");
    if (f.from.empty() || f.to.empty()) throw RecoveryError(line_no, "msg frame without participants");

    const std::string key = conversation_key(f.from, f.to);
    auto& next_seq = st.next_seq.try_emplace(key, 1).first->second;
    if (f.seq != next_seq) {
      throw RecoveryError(line_no, "seq " + std::to_string(f.seq) + " out of order in " + key + ", expected " +
                                       std::to_string(next_seq));
    }
    ++next_seq;
    st.participants.insert(f.from);
    st.participants.insert(f.to);
    st.histories[key].push_back(std::move(f));
    pos = next;
    st.valid_bytes = pos;
  }
  return st;
}

RecoveredState recover_file(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) return {};
  std::ifstream in(path, std::ios::binary);
  if (!in) throw RecoveryError(0, "cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return recover(ss.str());
}

ConversationLog::ConversationLog(const std::filesystem::path& path, std::optional<std::uintmax_t> keep_bytes) {
  if (keep_bytes && std::filesystem::exists(path) && std::filesystem::file_size(path) > *keep_bytes) {
    std::filesystem::resize_file(path, *keep_bytes);
  }
  bool needs_newline = false;
  if (std::filesystem::exists(path) && std::filesystem::file_size(path) > 0) {
    std::ifstream in(path, std::ios::binary);
    in.seekg(-1, std::ios::end);
    needs_newline = in.get() != '\n';
  }
  out_.open(path, std::ios::binary | std::ios::app);
  if (!out_) throw std::runtime_error("cannot open log for append: " + path.string());
  // A complete final record may still lack its terminator.
  if (needs_newline) out_ << '\n';
}

void ConversationLog::append(const WireFrame& f) {
  out_ << encode(f);
  out_.flush();
}

}  // namespace glassmsg
