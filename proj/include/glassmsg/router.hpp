#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "glassmsg/bot.hpp"
#include "glassmsg/conversation_log.hpp"
#include "glassmsg/wire.hpp"

namespace glassmsg {

using ConnectionId = std::uint64_t;

struct Outbound {
  ConnectionId to = 0;
  WireFrame frame;
  bool close = false;  // drop the connection after writing

  friend bool operator==(const Outbound&, const Outbound&) = default;
};

struct RouterConfig {
  std::size_t history_depth = 50;
};

// Routing state of the chat server: which names are live on which
// connection, per-conversation sequence counters, offline queues and pending
// bot replies. All methods must be called from one dispatcher; the router
// does no I/O itself and returns the frames to write.
class Router {
 public:
  using DeliverySink = std::function<void(const WireFrame&)>;

  explicit Router(RouterConfig cfg = {}, std::vector<BotScript> bots = {}, RecoveredState recovered = {},
                  DeliverySink sink = {});

  // Bot replies due at or before `now_ms` are routed first.
  std::vector<Outbound> handle_frame(ConnectionId conn, const WireFrame& f, std::int64_t now_ms);
  // Decodes one raw line; malformed input is answered with an err frame and
  // the connection stays open.
  std::vector<Outbound> handle_line(ConnectionId conn, std::string_view line, std::int64_t now_ms);
  std::vector<Outbound> disconnect(ConnectionId conn, std::int64_t now_ms);

  // Emits bot replies whose due time is <= now_ms, in (due, scheduling) order.
  std::vector<Outbound> fire_due(std::int64_t now_ms);
  std::optional<std::int64_t> next_timer() const;

  // Routes a message on behalf of `from` as if it arrived on `conn`. Does
  // not fire timers; call fire_due(now_ms) first.
  std::vector<Outbound> submit(ConnectionId conn, const std::string& from, const std::string& to,
                               const std::string& body, std::int64_t now_ms, std::string_view ref_id = {});

  std::optional<std::string> name_of(ConnectionId conn) const;
  std::optional<ConnectionId> connection_of(std::string_view name) const;
  bool is_bot(std::string_view name) const;
  bool is_known(std::string_view name) const;
  std::vector<std::string> known_names() const;

  const std::map<std::string, std::vector<WireFrame>>& histories() const { return histories_; }
  const std::map<std::string, std::int64_t>& next_seq() const { return next_seq_; }
  std::size_t queued_for(std::string_view name) const;

 private:
  std::vector<Outbound> hello(ConnectionId conn, const WireFrame& f, std::int64_t now_ms);
  std::vector<Outbound> history(ConnectionId conn, const WireFrame& f);
  void deliver(const WireFrame& msg, std::vector<Outbound>& out);
  void presence(const std::string& name, std::string_view state, std::int64_t now_ms, std::vector<Outbound>& out);

  RouterConfig cfg_;
  std::map<std::string, BotScript, std::less<>> bots_;
  DeliverySink sink_;

  std::map<std::string, ConnectionId, std::less<>> live_;
  std::map<ConnectionId, std::string> names_;
  std::set<std::string, std::less<>> known_;
  std::map<std::string, std::vector<WireFrame>, std::less<>> offline_;

  std::map<std::string, std::vector<WireFrame>> histories_;
  std::map<std::string, std::int64_t> next_seq_;

  // (due, scheduling order) -> reply
  std::map<std::tuple<std::int64_t, std::uint64_t>, WireFrame> timers_;
  std::uint64_t timer_counter_ = 0;
};

}  // namespace glassmsg
