#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <boost/asio/io_context.hpp>

#include "glassmsg/bot.hpp"
#include "glassmsg/router.hpp"
#include "glassmsg/session.hpp"
#include "glassmsg/wire.hpp"

namespace glassmsg::net {

struct ServerOptions {
  std::string host = "127.0.0.1";
  std::uint16_t port = 7870;                    // 0 picks an ephemeral port
  std::optional<std::uint16_t> ws_port = 7871;  // nullopt disables the browser endpoint
  std::filesystem::path log_path;               // empty disables persistence
  std::vector<BotScript> bots;
  RouterConfig router;
  SessionConfig session;  // engine settings for browser sessions
  std::function<std::int64_t()> clock;  // epoch milliseconds; system clock when empty
};

// The chat server. Newline-delimited frames over TCP on `port`; the same
// frames, one per WebSocket message, on ws://host:ws_port/session, where each
// connection also hosts a session engine driven by `event` frames and
// answered with `render` frames.
//
// Construction recovers from the log and binds both listeners; it throws
// RecoveryError for a corrupt log and boost::system::system_error when a
// port is unavailable. Everything runs on the io_context's thread.
class ChatServer {
 public:
  ChatServer(boost::asio::io_context& io, ServerOptions opts);
  ~ChatServer();
  ChatServer(const ChatServer&) = delete;
  ChatServer& operator=(const ChatServer&) = delete;

  std::uint16_t port() const;
  std::optional<std::uint16_t> ws_port() const;
  std::size_t recovery_warnings() const;

  // Closes the listeners and every connection. Call on the io thread.
  void stop();

  // Only safe while the io_context is not running.
  const Router& router() const;

  struct Impl;

 private:
  std::shared_ptr<Impl> impl_;
};

// A ChatServer running on its own thread, for tests and embedding.
class BackgroundServer {
 public:
  explicit BackgroundServer(ServerOptions opts);
  ~BackgroundServer();

  std::uint16_t port() const { return port_; }
  std::optional<std::uint16_t> ws_port() const { return ws_port_; }

  // Stops and joins. Histories stay readable afterwards.
  void stop();
  const Router& router() const { return server_->router(); }

 private:
  boost::asio::io_context io_;
  std::unique_ptr<ChatServer> server_;
  std::thread thread_;
  std::uint16_t port_ = 0;
  std::optional<std::uint16_t> ws_port_;
  bool stopped_ = false;
};

std::int64_t epoch_ms();

}  // namespace glassmsg::net
