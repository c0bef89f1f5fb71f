#include <doctest.h>

#include <string>

#include "glassmsg/conversation_log.hpp"
#include "glassmsg/net/line_client.hpp"
#include "glassmsg/net/scripted_client.hpp"
#include "glassmsg/net/server.hpp"
#include "support/tempdir.hpp"

using namespace glassmsg;
using namespace glassmsg::net;
using namespace std::chrono_literals;

namespace {

const std::string kData = GLASSMSG_TEST_DATA;

ServerOptions quiet_server(const std::filesystem::path& log, std::vector<BotScript> bots) {
  ServerOptions o;
  o.port = 0;
  o.ws_port = std::nullopt;
  o.log_path = log;
  o.bots = std::move(bots);
  return o;
}

}  // namespace

TEST_CASE("the five-step scenario against a live server") {
  testing::TempDir dir;
  const auto log = dir.path() / "chat.jsonl";
  BackgroundServer server(quiet_server(log, {BotScript{"Peter", {BotRule{"five", {"great"}, 100, 0}}, 1}}));

  ClientOptions opts;
  opts.port = server.port();
  opts.speed = 10;
  opts.linger = 500ms;
  const auto result = run_scripted_client(opts, load_trace(kData + "/fig1.trace.jsonl"));
  server.stop();

  CHECK(result.report.messages_sent == 1);
  CHECK_FALSE(result.final_state.visible);
  bool got_reply = false;
  for (const auto& f : result.received) {
    got_reply = got_reply || (f.type == FrameType::Msg && f.from == "Peter" && f.body == "great");
  }
  CHECK(got_reply);

  const auto rec = recover_file(log);
  const auto& h = rec.histories.at("Peter|self");
  REQUIRE(h.size() == 2);
  CHECK(h[0].from == "self");
  CHECK(h[0].to == "Peter");
  CHECK(h[0].body == "see you at five");
  CHECK(h[1].from == "Peter");
  CHECK(h[1].ts == h[0].ts + 100);
}

TEST_CASE("an empty trace registers and sends nothing") {
  testing::TempDir dir;
  const auto log = dir.path() / "chat.jsonl";
  BackgroundServer server(quiet_server(log, {}));
  ClientOptions opts;
  opts.port = server.port();
  opts.linger = 100ms;
  const auto result = run_scripted_client(opts, load_trace(kData + "/empty.trace.jsonl"));
  server.stop();
  CHECK(result.log.empty());
  CHECK(result.report.messages_sent == 0);
  CHECK(recover_file(log).histories.empty());
}

TEST_CASE("an unreachable server and a taken name are reported") {
  ClientOptions opts;
  {
    BackgroundServer probe(quiet_server({}, {}));
    opts.port = probe.port();
  }
  CHECK_THROWS_AS(run_scripted_client(opts, load_trace(kData + "/empty.trace.jsonl")), boost::system::system_error);

  BackgroundServer server(quiet_server({}, {BotScript{"Peter", {BotRule{"x", {"y"}, 0, 0}}, 1}}));
  opts.port = server.port();
  opts.name = "Peter";
  CHECK_THROWS_AS(run_scripted_client(opts, load_trace(kData + "/empty.trace.jsonl")), std::runtime_error);
}

TEST_CASE("two interleaved clients share one sequence per conversation") {
  testing::TempDir dir;
  const auto log = dir.path() / "chat.jsonl";
  BackgroundServer server(quiet_server(log, {}));
  LineClient a("127.0.0.1", server.port());
  LineClient b("127.0.0.1", server.port());
  a.send(WireFrame{.type = FrameType::Hello, .from = "alice"});
  b.send(WireFrame{.type = FrameType::Hello, .from = "bob"});
  REQUIRE(a.receive_type(FrameType::HelloAck));
  REQUIRE(b.receive_type(FrameType::HelloAck));

  std::vector<std::string> sent;
  for (int i = 0; i < 100; ++i) {
    auto& c = i % 3 == 0 ? b : a;
    const std::string body = "m" + std::to_string(i);
    c.send(WireFrame{.type = FrameType::Msg, .to = &c == &a ? "bob" : "alice", .body = body});
    const auto ack = c.receive_type(FrameType::Ack);
    REQUIRE(ack.has_value());
    CHECK(ack->seq == i + 1);
    sent.push_back(body);
  }
  server.stop();
  const auto& h = recover_file(log).histories.at("alice|bob");
  REQUIRE(h.size() == sent.size());
  for (std::size_t i = 0; i < h.size(); ++i) {
    CHECK(h[i].body == sent[i]);
    CHECK(h[i].seq == static_cast<std::int64_t>(i) + 1);
  }
}
