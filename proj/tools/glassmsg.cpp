// glassmsg: chat server, trace replayer, scripted client and bot checker.
//
// Exit codes: 0 success, 2 bad usage, 3 runtime failure.

#include <csignal>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <boost/asio/io_context.hpp>
#include <boost/asio/signal_set.hpp>

#include "glassmsg/bot.hpp"
#include "glassmsg/config.hpp"
#include "glassmsg/conversation_log.hpp"
#include "glassmsg/metrics.hpp"
#include "glassmsg/net/scripted_client.hpp"
#include "glassmsg/net/server.hpp"
#include "glassmsg/serialize.hpp"
#include "glassmsg/trace.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitRuntime = 3;

struct RuntimeFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void add_config_flags(CLI::App& cmd, glassmsg::ConfigLayer& flags, std::string& config_path, bool server_flags) {
  cmd.add_option("--config", config_path, "JSON config file (flags override it)");
  cmd.add_option("--host", flags.host, "Server address");
  cmd.add_option("--port", flags.port, "TCP port (default 7870)");
  if (server_flags) {
    cmd.add_option("--ws-port", flags.ws_port, "Browser WebSocket port (default 7871)");
    cmd.add_option("--bots", flags.bots_path, "Bot script file (JSON array)");
    cmd.add_option("--log", flags.log_path, "Conversation log (JSONL); recovered on start");
    cmd.add_option("--history-depth", flags.history_depth, "Messages returned per history request (default 50)");
    cmd.add_option("--seed", flags.seed, "Seed for bot scripts without their own rng_seed");
  }
  cmd.add_option("--silence-gap-ms", flags.silence_gap_ms, "Dictation silence gap (default 2000)");
}

glassmsg::Config resolve(const std::string& config_path, const glassmsg::ConfigLayer& flags) {
  glassmsg::ConfigLayer file;
  if (!config_path.empty()) file = glassmsg::load_config_file(config_path);
  return glassmsg::resolve_config(file, flags);
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw RuntimeFailure("cannot write " + path);
  out << content;
}

void emit_report(const glassmsg::MetricsReport& report, const std::string& report_path) {
  const std::string doc = glassmsg::to_json(report).dump(2) + "\n";
  if (report_path.empty()) {
    std::cout << doc;
  } else {
    write_file(report_path, doc);
  }
  std::cout << glassmsg::format_report_table(report);
}

int run_server(const glassmsg::Config& cfg) {
  glassmsg::net::ServerOptions opts;
  opts.host = cfg.host;
  opts.port = cfg.port;
  opts.ws_port = cfg.ws_port;
  opts.log_path = cfg.log_path;
  opts.router.history_depth = cfg.history_depth;
  opts.session.silence_gap_ms = cfg.silence_gap_ms;
  if (!cfg.bots_path.empty()) {
    try {
      opts.bots = glassmsg::load_bot_scripts(cfg.bots_path, cfg.seed);
    } catch (const std::invalid_argument& e) {
      throw RuntimeFailure(e.what());
    }
  }

  boost::asio::io_context io;
  std::optional<glassmsg::net::ChatServer> server;
  try {
    server.emplace(io, std::move(opts));
  } catch (const glassmsg::RecoveryError& e) {
    throw RuntimeFailure(std::string("startup failed: ") + e.what());
  } catch (const boost::system::system_error& e) {
    throw RuntimeFailure("cannot listen on " + cfg.host + ": " + e.code().message());
  }

  std::cerr << "glassmsg: serving on " << cfg.host << ":" << server->port();
  if (auto ws = server->ws_port()) std::cerr << ", ws://" << cfg.host << ":" << *ws << "/session";
  std::cerr << std::endl;

  boost::asio::signal_set signals(io, SIGINT, SIGTERM);
  signals.async_wait([&](boost::system::error_code, int) { server->stop(); });
  io.run();
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Heads-up messaging: chat server, session replay and metrics"};
  app.require_subcommand(1);

  glassmsg::ConfigLayer flags;
  std::string config_path;

  auto* serve = app.add_subcommand("serve", "Run the chat server");
  add_config_flags(*serve, flags, config_path, true);

  std::string trace_path;
  std::string report_path;
  std::string effects_path;
  auto* replay = app.add_subcommand("replay", "Replay a trace through the session engine and report metrics");
  replay->add_option("--trace", trace_path, "Trace file (JSONL)")->required();
  replay->add_option("--report", report_path, "Write the JSON report here instead of stdout");
  replay->add_option("--effects", effects_path, "Write the effect log (JSONL) here");
  replay->add_option("--silence-gap-ms", flags.silence_gap_ms, "Override the trace's silence gap");

  std::string client_name = "self";
  double speed = 1.0;
  std::int64_t linger_ms = 1000;
  auto* client = app.add_subcommand("client", "Play a trace against a live server");
  add_config_flags(*client, flags, config_path, false);
  client->add_option("--trace", trace_path, "Trace file (JSONL)")->required();
  client->add_option("--name", client_name, "Name to register as");
  client->add_option("--report", report_path, "Write the JSON report here instead of stdout");
  client->add_option("--effects", effects_path, "Write the effect log (JSONL) here");
  client->add_option("--speed", speed, "Trace milliseconds per wall-clock millisecond")->check(CLI::PositiveNumber);
  client->add_option("--linger-ms", linger_ms, "Keep listening this long after the last event")
      ->check(CLI::NonNegativeNumber);

  std::string bots_path;
  std::uint64_t seed = 0;
  std::string probe_from = "self";
  std::string probe_to;
  std::string probe_body;
  std::int64_t probe_seq = 1;
  auto* bots_check = app.add_subcommand("bots-check", "Validate a bot script file and preview replies");
  bots_check->add_option("bots", bots_path, "Bot script file")->required();
  bots_check->add_option("--seed", seed, "Seed for scripts without rng_seed");
  bots_check->add_option("--to", probe_to, "Preview: bot to address");
  bots_check->add_option("--body", probe_body, "Preview: message body");
  bots_check->add_option("--from", probe_from, "Preview: sender name");
  bots_check->add_option("--seq", probe_seq, "Preview: conversation sequence number");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*serve) return run_server(resolve(config_path, flags));

    if (*replay) {
      const auto trace = glassmsg::load_trace(trace_path);
      const auto result = glassmsg::replay(trace, flags.silence_gap_ms);
      if (!effects_path.empty()) write_file(effects_path, glassmsg::write_effect_log(result.log));
      emit_report(result.report, report_path);
      return kExitOk;
    }

    if (*client) {
      const auto cfg = resolve(config_path, flags);
      const auto trace = glassmsg::load_trace(trace_path);
      glassmsg::net::ClientOptions opts;
      opts.host = cfg.host;
      opts.port = cfg.port;
      opts.name = client_name;
      opts.speed = speed;
      opts.linger = std::chrono::milliseconds(linger_ms);
      opts.silence_gap_ms = flags.silence_gap_ms;
      glassmsg::net::ClientResult result;
      try {
        result = glassmsg::net::run_scripted_client(opts, trace);
      } catch (const boost::system::system_error& e) {
        throw RuntimeFailure("cannot reach " + cfg.host + ":" + std::to_string(cfg.port) + ": " + e.code().message());
      }
      if (!effects_path.empty()) write_file(effects_path, glassmsg::write_effect_log(result.log));
      emit_report(result.report, report_path);
      return kExitOk;
    }

    if (*bots_check) {
      const auto scripts = glassmsg::load_bot_scripts(bots_path, seed);
      for (const auto& s : scripts) {
        std::cout << s.name << ": " << s.rules.size() << " rule(s), seed " << s.rng_seed << '\n';
      }
      if (!probe_to.empty()) {
        glassmsg::WireFrame probe{.type = glassmsg::FrameType::Msg, .from = probe_from, .to = probe_to,
                                  .body = probe_body, .seq = probe_seq};
        for (const auto& s : scripts) {
          for (const auto& r : glassmsg::bot_step(s, probe, 0)) {
            std::cout << "+" << r.due_ms << "ms " << r.frame.from << " -> " << r.frame.to << ": " << r.frame.body
                      << '\n';
          }
        }
      }
      return kExitOk;
    }
  } catch (const std::exception& e) {
    std::cerr << "glassmsg: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}
