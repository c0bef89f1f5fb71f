#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "glassmsg/conversation_log.hpp"
#include "support/tempdir.hpp"

using namespace glassmsg;

namespace {

WireFrame logged(std::string from, std::string to, std::int64_t seq, std::string body = "b") {
  WireFrame f{.type = FrameType::Msg, .from = std::move(from), .to = std::move(to), .body = std::move(body),
              .ts = 1000 + seq, .seq = seq};
  f.id = conversation_key(f.from, f.to) + "-" + std::to_string(seq);
  return f;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("conversation keys are unordered") {
  CHECK(conversation_key("self", "Peter") == "Peter|self");
  CHECK(conversation_key("Peter", "self") == "Peter|self");
}

TEST_CASE("an empty log recovers to nothing") {
  const auto st = recover("");
  CHECK(st.histories.empty());
  CHECK(st.next_seq.empty());
  CHECK(st.warnings == 0);
}

TEST_CASE("three frames give next seq 4") {
  std::string text;
  for (int i = 1; i <= 3; ++i) text += encode(logged("self", "Peter", i));
  const auto st = recover(text);
  REQUIRE(st.histories.at("Peter|self").size() == 3);
  CHECK(st.next_seq.at("Peter|self") == 4);
  CHECK(st.histories.at("Peter|self")[2] == logged("self", "Peter", 3));
  CHECK(st.valid_bytes == text.size());
  CHECK(st.participants == std::set<std::string>{"Peter", "self"});
  CHECK(recover(text) == st);
}

TEST_CASE("a half-written last line is dropped with a warning") {
  std::string text;
  for (int i = 1; i <= 3; ++i) text += encode(logged("self", "Peter", i));
  const std::size_t cut = text.size() - 20;
  const auto st = recover(text.substr(0, cut));
  CHECK(st.histories.at("Peter|self").size() == 2);
  CHECK(st.warnings == 1);
  CHECK(st.next_seq.at("Peter|self") == 3);
  CHECK(st.valid_bytes == encode(logged("self", "Peter", 1)).size() + encode(logged("self", "Peter", 2)).size());
}

TEST_CASE("any other corruption names its line") {
  const std::string a = encode(logged("self", "Peter", 1));
  const std::string b = encode(logged("self", "Peter", 2));

  auto line_of = [](const std::string& text) -> std::size_t {
    try {
      recover(text);
    } catch (const RecoveryError& e) {
      return e.line();
    }
    return 0;
  };
  CHECK(line_of(a + "garbage\n" + b) == 2);
  CHECK(line_of(a + "\n" + b + "{\"v\":1,\"type\":\"msg\"\n") == 4);
  CHECK(line_of(a + a) == 2);                                                       // duplicate seq
  CHECK(line_of(a + encode(logged("self", "Peter", 3))) == 2);                      // gap
  CHECK(line_of(a + encode(WireFrame{.type = FrameType::Ack, .from = "x"})) == 2);  // not a msg
  CHECK(line_of(a + "garbage") == 0);                                               // torn tail
}

TEST_CASE("conversations are independent") {
  std::string text;
  text += encode(logged("self", "Peter", 1));
  text += encode(logged("Mary", "self", 1));
  text += encode(logged("Peter", "self", 2));
  const auto st = recover(text);
  CHECK(st.next_seq.at("Peter|self") == 3);
  CHECK(st.next_seq.at("Mary|self") == 2);
}

TEST_CASE("the writer truncates a torn tail before appending") {
  testing::TempDir dir;
  const auto path = dir.path() / "log.jsonl";
  {
    ConversationLog log(path);
    log.append(logged("self", "Peter", 1));
    log.append(logged("self", "Peter", 2));
  }
  {
    std::ofstream tail(path, std::ios::binary | std::ios::app);
    tail << R"({"v":1,"type":"msg","fr)";
  }
  auto st = recover_file(path);
  CHECK(st.warnings == 1);
  {
    ConversationLog log(path, st.valid_bytes);
    log.append(logged("self", "Peter", 3));
  }
  st = recover_file(path);
  CHECK(st.warnings == 0);
  CHECK(st.histories.at("Peter|self").size() == 3);
}

TEST_CASE("an unterminated but complete record gets its newline") {
  testing::TempDir dir;
  const auto path = dir.path() / "log.jsonl";
  {
    std::ofstream out(path, std::ios::binary);
    auto line = encode(logged("self", "Peter", 1));
    line.pop_back();
    out << line;
  }
  auto st = recover_file(path);
  CHECK(st.warnings == 0);
  {
    ConversationLog log(path, st.valid_bytes);
    log.append(logged("self", "Peter", 2));
  }
  st = recover_file(path);
  CHECK(st.histories.at("Peter|self").size() == 2);
  CHECK(slurp(path).back() == '\n');
}

TEST_CASE("a missing file recovers to nothing") {
  CHECK(recover_file("/nonexistent/dir/log.jsonl") == RecoveredState{});
}
