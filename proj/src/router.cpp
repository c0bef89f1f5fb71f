#include "glassmsg/router.hpp"

#include <algorithm>

#include <nlohmann/json.hpp>

namespace glassmsg {
namespace {

constexpr std::size_t kMaxNameBytes = 64;

bool valid_name(std::string_view name) {
  if (name.empty() || name.size() > kMaxNameBytes) return false;
  return std::none_of(name.begin(), name.end(),
                      [](char c) { return c == '|' || static_cast<unsigned char>(c) < 0x20 || c == 0x7f; });
}

Outbound error_to(ConnectionId conn, std::string_view code, std::string_view ref_id = {}, bool close = false) {
  return Outbound{conn, make_error_frame(code, ref_id), close};
}

}  // namespace

Router::Router(RouterConfig cfg, std::vector<BotScript> bots, RecoveredState recovered, DeliverySink sink)
    : cfg_(cfg), sink_(std::move(sink)) {
  for (auto& b : bots) {
    known_.insert(b.name);
    std::string name = b.name;
    bots_.emplace(std::move(name), std::move(b));
  }
  for (const auto& p : recovered.participants) known_.insert(p);
  histories_ = std::move(recovered.histories);
  next_seq_ = std::move(recovered.next_seq);
}

std::vector<Outbound> Router::handle_line(ConnectionId conn, std::string_view line, std::int64_t now_ms) {
  WireFrame f;
  try {
    f = decode(line);
  } catch (const FrameError& e) {
    return {error_to(conn, e.code())};
  }
  return handle_frame(conn, f, now_ms);
}

std::vector<Outbound> Router::handle_frame(ConnectionId conn, const WireFrame& f, std::int64_t now_ms) {
  // Replies that fell due first keep the timeline ordered.
  auto out = fire_due(now_ms);
  auto append = [&](std::vector<Outbound> more) {
    out.insert(out.end(), std::make_move_iterator(more.begin()), std::make_move_iterator(more.end()));
    return std::move(out);
  };
  switch (f.type) {
    case FrameType::Hello:
      return append(hello(conn, f, now_ms));
    case FrameType::Msg: {
      auto name = name_of(conn);
      if (!name) return append({error_to(conn, "not_registered", f.id)});
      return append(submit(conn, *name, f.to, f.body, now_ms, f.id));
    }
    case FrameType::HistoryReq:
      return append(history(conn, f));
    default:
      return append({error_to(conn, "bad_frame", f.id)});
  }
}

std::vector<Outbound> Router::hello(ConnectionId conn, const WireFrame& f, std::int64_t now_ms) {
  if (!valid_name(f.from)) return {error_to(conn, "bad_name", f.id)};
  if (auto existing = names_.find(conn); existing != names_.end()) {
    if (existing->second == f.from) return {Outbound{conn, WireFrame{.type = FrameType::HelloAck, .to = f.from, .ts = now_ms}}};
    return {error_to(conn, "already_registered", f.id)};
  }
  if (live_.contains(f.from) || bots_.contains(f.from)) return {error_to(conn, "name_taken", f.id, true)};

  live_.emplace(f.from, conn);
  names_.emplace(conn, f.from);
  known_.insert(f.from);

  std::vector<Outbound> out;
  auto queued = offline_.find(f.from);
  const std::int64_t pending = queued == offline_.end() ? 0 : static_cast<std::int64_t>(queued->second.size());
  out.push_back(Outbound{conn, WireFrame{.type = FrameType::HelloAck, .to = f.from, .ts = now_ms, .seq = pending}});
  if (queued != offline_.end()) {
    for (auto& m : queued->second) out.push_back(Outbound{conn, std::move(m)});
    offline_.erase(queued);
  }
  presence(f.from, "online", now_ms, out);
  return out;
}

std::vector<Outbound> Router::history(ConnectionId conn, const WireFrame& f) {
  auto name = name_of(conn);
  if (!name) return {error_to(conn, "not_registered", f.id)};
  if (!is_known(f.to)) return {error_to(conn, "unknown_recipient", f.id)};

  std::size_t depth = cfg_.history_depth;
  if (f.seq > 0) depth = std::min(depth, static_cast<std::size_t>(f.seq));

  nlohmann::json items = nlohmann::json::array();
  if (auto it = histories_.find(conversation_key(*name, f.to)); it != histories_.end()) {
    const auto& msgs = it->second;
    const std::size_t first = msgs.size() > depth ? msgs.size() - depth : 0;
    for (std::size_t i = first; i < msgs.size(); ++i) {
      std::string line = encode(msgs[i]);
      line.pop_back();
      items.push_back(nlohmann::json::parse(line));
    }
  }
  WireFrame reply{.type = FrameType::History,
                  .id = f.id,
                  .from = f.to,
                  .to = *name,
                  .body = items.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace),
                  .seq = static_cast<std::int64_t>(items.size())};
  return {Outbound{conn, std::move(reply)}};
}

std::vector<Outbound> Router::submit(ConnectionId conn, const std::string& from, const std::string& to,
                                     const std::string& body, std::int64_t now_ms, std::string_view ref_id) {
  if (to.empty() || !is_known(to) || to == from) return {error_to(conn, "unknown_recipient", ref_id)};
  if (body.empty()) return {error_to(conn, "empty_body", ref_id)};

  const std::string key = conversation_key(from, to);
  auto& counter = next_seq_.try_emplace(key, 1).first->second;
  const std::int64_t seq = counter++;

  WireFrame msg{.type = FrameType::Msg,
                .id = key + "-" + std::to_string(seq),
                .from = from,
                .to = to,
                .body = body,
                .ts = now_ms,
                .seq = seq};
  histories_[key].push_back(msg);
  if (sink_) sink_(msg);

  std::vector<Outbound> out;
  out.push_back(Outbound{conn, WireFrame{.type = FrameType::Ack,
                                         .id = msg.id,
                                         .from = from,
                                         .to = to,
                                         .body = std::string(ref_id),
                                         .ts = now_ms,
                                         .seq = seq}});
  deliver(msg, out);
  return out;
}

void Router::deliver(const WireFrame& msg, std::vector<Outbound>& out) {
  if (auto bot = bots_.find(msg.to); bot != bots_.end()) {
    for (auto& s : bot_step(bot->second, msg, msg.ts)) {
      timers_.emplace(std::tuple{s.due_ms, timer_counter_++}, std::move(s.frame));
    }
    return;
  }
  if (auto live = live_.find(msg.to); live != live_.end()) {
    out.push_back(Outbound{live->second, msg});
    return;
  }
  offline_[msg.to].push_back(msg);
}

void Router::presence(const std::string& name, std::string_view state, std::int64_t now_ms,
                      std::vector<Outbound>& out) {
  for (const auto& [other, conn] : live_) {
    if (other == name) continue;
    out.push_back(Outbound{conn, WireFrame{.type = FrameType::Notify,
                                           .from = name,
                                           .to = other,
                                           .body = std::string(state),
                                           .ts = now_ms}});
  }
}

std::vector<Outbound> Router::disconnect(ConnectionId conn, std::int64_t now_ms) {
  auto it = names_.find(conn);
  if (it == names_.end()) return {};
  const std::string name = it->second;
  names_.erase(it);
  live_.erase(name);
  std::vector<Outbound> out;
  presence(name, "offline", now_ms, out);
  return out;
}

std::vector<Outbound> Router::fire_due(std::int64_t now_ms) {
  std::vector<Outbound> out;
  while (!timers_.empty() && std::get<0>(timers_.begin()->first) <= now_ms) {
    auto node = timers_.extract(timers_.begin());
    const std::int64_t due = std::get<0>(node.key());
    const WireFrame& reply = node.mapped();
    // Bots have no connection; acks and errors addressed to them are dropped.
    auto routed = submit(0, reply.from, reply.to, reply.body, due);
    for (auto& o : routed) {
      if (o.to != 0) out.push_back(std::move(o));
    }
  }
  return out;
}

std::optional<std::int64_t> Router::next_timer() const {
  if (timers_.empty()) return std::nullopt;
  return std::get<0>(timers_.begin()->first);
}

std::optional<std::string> Router::name_of(ConnectionId conn) const {
  auto it = names_.find(conn);
  if (it == names_.end()) return std::nullopt;
  return it->second;
}

std::optional<ConnectionId> Router::connection_of(std::string_view name) const {
  auto it = live_.find(name);
  if (it == live_.end()) return std::nullopt;
  return it->second;
}

bool Router::is_bot(std::string_view name) const { return bots_.contains(name); }
bool Router::is_known(std::string_view name) const { return known_.contains(name); }

std::vector<std::string> Router::known_names() const { return {known_.begin(), known_.end()}; }

std::size_t Router::queued_for(std::string_view name) const {
  auto it = offline_.find(name);
  return it == offline_.end() ? 0 : it->second.size();
}

}  // namespace glassmsg
