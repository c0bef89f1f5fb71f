#include "glassmsg/net/server.hpp"

#include <chrono>
#include <deque>
#include <iostream>

#include <boost/asio/ip/tcp.hpp>
#include <boost/asio/post.hpp>
#include <boost/asio/steady_timer.hpp>
#include <boost/asio/write.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>

#include "glassmsg/conversation_log.hpp"
#include "glassmsg/metrics.hpp"
#include "glassmsg/serialize.hpp"
#include "glassmsg/trace.hpp"

namespace glassmsg::net {

namespace asio = boost::asio;
namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
using tcp = asio::ip::tcp;

std::int64_t epoch_ms() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::system_clock::now().time_since_epoch())
      .count();
}

namespace {

class Peer {
 public:
  explicit Peer(ConnectionId id) : id_(id) {}
  virtual ~Peer() = default;
  virtual void deliver(const WireFrame& f) = 0;
  virtual void close() = 0;
  ConnectionId id() const { return id_; }

 private:
  ConnectionId id_;
};

}  // namespace

struct ChatServer::Impl : std::enable_shared_from_this<ChatServer::Impl> {
  Impl(asio::io_context& io_ctx, ServerOptions o)
      : io(io_ctx), opts(std::move(o)), acceptor(io_ctx), bot_timer(io_ctx) {}

  std::int64_t now() const { return opts.clock ? opts.clock() : epoch_ms(); }

  void start();
  void accept_tcp();
  void accept_ws();
  void dispatch(std::vector<Outbound> out);
  void rearm_timer();
  void on_line(ConnectionId id, std::string_view line) { dispatch(router.handle_line(id, line, now())); }
  void on_frame(ConnectionId id, const WireFrame& f) { dispatch(router.handle_frame(id, f, now())); }
  void on_disconnect(ConnectionId id) {
    if (peers.erase(id) == 0) return;
    dispatch(router.disconnect(id, now()));
  }

  asio::io_context& io;
  ServerOptions opts;
  Router router;
  std::optional<ConversationLog> log;
  std::size_t warnings = 0;
  tcp::acceptor acceptor;
  std::optional<tcp::acceptor> ws_acceptor;
  asio::steady_timer bot_timer;
  std::map<ConnectionId, std::shared_ptr<Peer>> peers;
  ConnectionId next_id = 1;
  bool stopped = false;
};

namespace {

class TcpPeer : public Peer, public std::enable_shared_from_this<TcpPeer> {
 public:
  TcpPeer(ConnectionId id, tcp::socket socket, std::shared_ptr<ChatServer::Impl> server)
      : Peer(id), socket_(std::move(socket)), server_(std::move(server)) {}

  void start() { read(); }

  void deliver(const WireFrame& f) override {
    if (closing_) return;
    queue_.push_back(encode(f));
    if (queue_.size() == 1) write();
  }

  void close() override {
    closing_ = true;
    if (queue_.empty()) shutdown();
  }

 private:
  void read() {
    socket_.async_read_some(asio::buffer(chunk_), [self = shared_from_this()](boost::system::error_code ec, std::size_t n) {
      if (ec) {
        self->shutdown();
        return;
      }
      self->consume(std::string_view(self->chunk_.data(), n));
      if (!self->closed_) self->read();
    });
  }

  void consume(std::string_view bytes) {
    pending_.append(bytes);
    std::size_t start = 0;
    while (!closed_) {
      const std::size_t nl = pending_.find('\n', start);
      if (nl == std::string::npos) break;
      const std::string_view line(pending_.data() + start, nl - start);
      start = nl + 1;
      if (discarding_) {
        discarding_ = false;
        continue;
      }
      if (line.empty() || line == "\r") continue;
      server_->on_line(id(), line);
    }
    pending_.erase(0, start);
    if (pending_.size() > kMaxFrameBytes + 1) {
      pending_.clear();
      if (!discarding_) deliver(make_error_frame("frame_too_large"));
      discarding_ = true;
    }
  }

  void write() {
    asio::async_write(socket_, asio::buffer(queue_.front()),
                      [self = shared_from_this()](boost::system::error_code ec, std::size_t) {
                        if (ec) {
                          self->shutdown();
                          return;
                        }
                        self->queue_.pop_front();
                        if (!self->queue_.empty()) {
                          self->write();
                        } else if (self->closing_) {
                          self->shutdown();
                        }
                      });
  }

  void shutdown() {
    if (closed_) return;
    closed_ = true;
    boost::system::error_code ec;
    socket_.shutdown(tcp::socket::shutdown_both, ec);
    socket_.close(ec);
    server_->on_disconnect(id());
  }

  tcp::socket socket_;
  std::shared_ptr<ChatServer::Impl> server_;
  std::array<char, 8192> chunk_{};
  std::string pending_;
  std::deque<std::string> queue_;
  bool discarding_ = false;
  bool closing_ = false;
  bool closed_ = false;
};

// Browser session: the wire protocol over WebSocket plus a server-side
// session engine fed by `event` frames.
class WsPeer : public Peer, public std::enable_shared_from_this<WsPeer> {
 public:
  WsPeer(ConnectionId id, tcp::socket socket, std::shared_ptr<ChatServer::Impl> server)
      : Peer(id), ws_(std::move(socket)), server_(std::move(server)) {}

  void start() {
    http::async_read(ws_.next_layer(), buffer_, request_,
                     [self = shared_from_this()](boost::system::error_code ec, std::size_t) {
                       if (ec) return self->shutdown();
                       self->on_request();
                     });
  }

  void deliver(const WireFrame& f) override {
    if (closed_) return;
    if (f.type == FrameType::HelloAck && !session_) {
      name_ = f.to;
      std::vector<std::string> contacts;
      for (const auto& n : server_->router.known_names()) {
        if (n != name_) contacts.push_back(n);
      }
      SessionConfig cfg = server_->opts.session;
      cfg.self_name = name_;
      session_.emplace(cfg, contacts, now());
      send_raw(encode(f));
      send_render({});
      return;
    }
    send_raw(encode(f));
    if (f.type == FrameType::Msg && session_ && f.to == name_) {
      auto effects = session_->incoming(Message{f.id, f.from, f.to, f.body, f.ts}, now());
      send_render(effects);
    }
  }

  void close() override {
    closing_ = true;
    if (queue_.empty()) shutdown();
  }

 private:
  std::int64_t now() const {
    const std::int64_t t = server_->now();
    return session_ ? std::max(t, session_->state().clock_ms) : t;
  }

  void on_request() {
    const auto target = std::string_view(request_.target().data(), request_.target().size());
    const bool session_path = target == "/session" || target.starts_with("/session?");
    if (!websocket::is_upgrade(request_) || !session_path) {
      auto res = std::make_shared<http::response<http::string_body>>(http::status::not_found, request_.version());
      res->set(http::field::content_type, "text/plain");
      res->body() = "websocket endpoint is /session\n";
      res->prepare_payload();
      http::async_write(ws_.next_layer(), *res, [self = shared_from_this(), res](boost::system::error_code, std::size_t) {
        self->shutdown();
      });
      return;
    }
    ws_.read_message_max(4 * kMaxFrameBytes);
    ws_.async_accept(request_, [self = shared_from_this()](boost::system::error_code ec) {
      if (ec) return self->shutdown();
      self->accepted_ = true;
      self->read();
    });
  }

  void read() {
    buffer_.consume(buffer_.size());
    ws_.async_read(buffer_, [self = shared_from_this()](boost::system::error_code ec, std::size_t) {
      if (ec) return self->shutdown();
      self->on_message(beast::buffers_to_string(self->buffer_.data()));
      if (!self->closed_) self->read();
    });
  }

  void on_message(const std::string& text) {
    WireFrame f;
    try {
      f = decode(text);
    } catch (const FrameError& e) {
      send_raw(encode(make_error_frame(e.code())));
      return;
    }
    if (f.type != FrameType::Event) {
      server_->on_frame(id(), f);
      return;
    }
    if (!session_) {
      send_raw(encode(make_error_frame("not_registered", f.id)));
      return;
    }

    TracePayload payload;
    try {
      payload = payload_from_json(json::parse(f.body));
    } catch (const std::exception&) {
      send_raw(encode(make_error_frame("bad_event", f.id)));
      return;
    }
    if (std::holds_alternative<Message>(payload)) {
      send_raw(encode(make_error_frame("bad_event", f.id)));
      return;
    }

    const std::int64_t t = now();
    auto effects = dispatch(*session_, payload, t);
    server_->dispatch(server_->router.fire_due(t));
    for (const auto& e : effects) {
      if (const auto* s = std::get_if<effect::SendMessage>(&e)) {
        server_->dispatch(server_->router.submit(id(), name_, s->message.recipient, s->message.body, t, s->message.id));
      }
    }
    send_render(effects);
  }

  void send_render(const std::vector<Effect>& effects) {
    json fx = json::array();
    for (const auto& e : effects) fx.push_back(to_json(e));
    json body{{"render", to_json(session_->render())}, {"effects", fx}};
    WireFrame f{.type = FrameType::Render,
                .to = name_,
                .body = body.dump(-1, ' ', false, json::error_handler_t::replace),
                .ts = now()};
    send_raw(encode(f));
  }

  void send_raw(std::string line) {
    if (closed_ || !accepted_) return;
    if (!line.empty() && line.back() == '\n') line.pop_back();
    queue_.push_back(std::move(line));
    if (queue_.size() == 1) write();
  }

  void write() {
    ws_.text(true);
    ws_.async_write(asio::buffer(queue_.front()), [self = shared_from_this()](boost::system::error_code ec, std::size_t) {
      if (ec) return self->shutdown();
      self->queue_.pop_front();
      if (!self->queue_.empty()) {
        self->write();
      } else if (self->closing_) {
        self->shutdown();
      }
    });
  }

  void shutdown() {
    if (closed_) return;
    closed_ = true;
    boost::system::error_code ec;
    beast::get_lowest_layer(ws_).socket().shutdown(tcp::socket::shutdown_both, ec);
    beast::get_lowest_layer(ws_).socket().close(ec);
    server_->on_disconnect(id());
  }

  websocket::stream<beast::tcp_stream> ws_;
  std::shared_ptr<ChatServer::Impl> server_;
  beast::flat_buffer buffer_;
  http::request<http::string_body> request_;
  std::deque<std::string> queue_;
  std::optional<Session> session_;
  std::string name_;
  bool accepted_ = false;
  bool closing_ = false;
  bool closed_ = false;
};

}  // namespace

void ChatServer::Impl::start() {
  RecoveredState recovered;
  if (!opts.log_path.empty()) {
    recovered = recover_file(opts.log_path);
    warnings = recovered.warnings;
    if (warnings > 0) {
      std::cerr << "glassmsg: dropped " << warnings << " truncated record(s) at the end of " << opts.log_path << '\n';
    }
    log.emplace(opts.log_path, recovered.valid_bytes);
  }
  Router::DeliverySink sink;
  if (log) sink = [this](const WireFrame& f) { log->append(f); };
  router = Router(opts.router, opts.bots, std::move(recovered), std::move(sink));

  const auto address = asio::ip::make_address(opts.host);
  auto listen = [&](tcp::acceptor& a, std::uint16_t port) {
    tcp::endpoint ep(address, port);
    a.open(ep.protocol());
    a.set_option(tcp::acceptor::reuse_address(true));
    a.bind(ep);
    a.listen();
  };
  listen(acceptor, opts.port);
  if (opts.ws_port) {
    ws_acceptor.emplace(io);
    listen(*ws_acceptor, *opts.ws_port);
  }
  accept_tcp();
  if (ws_acceptor) accept_ws();
}

void ChatServer::Impl::accept_tcp() {
  acceptor.async_accept([self = shared_from_this()](boost::system::error_code ec, tcp::socket socket) {
    if (ec || self->stopped) return;
    boost::system::error_code opt_ec;
    socket.set_option(tcp::no_delay(true), opt_ec);
    auto peer = std::make_shared<TcpPeer>(self->next_id++, std::move(socket), self);
    self->peers.emplace(peer->id(), peer);
    peer->start();
    self->accept_tcp();
  });
}

void ChatServer::Impl::accept_ws() {
  ws_acceptor->async_accept([self = shared_from_this()](boost::system::error_code ec, tcp::socket socket) {
    if (ec || self->stopped) return;
    auto peer = std::make_shared<WsPeer>(self->next_id++, std::move(socket), self);
    self->peers.emplace(peer->id(), peer);
    peer->start();
    self->accept_ws();
  });
}

void ChatServer::Impl::dispatch(std::vector<Outbound> out) {
  for (auto& o : out) {
    auto it = peers.find(o.to);
    if (it == peers.end()) continue;
    auto peer = it->second;
    peer->deliver(o.frame);
    if (o.close) peer->close();
  }
  rearm_timer();
}

void ChatServer::Impl::rearm_timer() {
  auto due = router.next_timer();
  if (!due || stopped) {
    bot_timer.cancel();
    return;
  }
  const auto wait = std::max<std::int64_t>(0, *due - now());
  bot_timer.expires_after(std::chrono::milliseconds(wait));
  bot_timer.async_wait([self = shared_from_this()](boost::system::error_code ec) {
    if (ec || self->stopped) return;
    // The system clock may lag the steady timer by a millisecond or two.
    const std::int64_t t = std::max(self->now(), self->router.next_timer().value_or(0));
    self->dispatch(self->router.fire_due(t));
  });
}

ChatServer::ChatServer(asio::io_context& io, ServerOptions opts) : impl_(std::make_shared<Impl>(io, std::move(opts))) {
  impl_->start();
}

ChatServer::~ChatServer() {
  if (!impl_->stopped) stop();
}

std::uint16_t ChatServer::port() const { return impl_->acceptor.local_endpoint().port(); }

std::optional<std::uint16_t> ChatServer::ws_port() const {
  if (!impl_->ws_acceptor) return std::nullopt;
  return impl_->ws_acceptor->local_endpoint().port();
}

std::size_t ChatServer::recovery_warnings() const { return impl_->warnings; }

void ChatServer::stop() {
  auto& s = *impl_;
  if (s.stopped) return;
  s.stopped = true;
  boost::system::error_code ec;
  s.acceptor.close(ec);
  if (s.ws_acceptor) s.ws_acceptor->close(ec);
  s.bot_timer.cancel();
  auto peers = s.peers;
  for (auto& [_, p] : peers) p->close();
}

const Router& ChatServer::router() const { return impl_->router; }

BackgroundServer::BackgroundServer(ServerOptions opts) {
  server_ = std::make_unique<ChatServer>(io_, std::move(opts));
  port_ = server_->port();
  ws_port_ = server_->ws_port();
  thread_ = std::thread([this] { io_.run(); });
}

BackgroundServer::~BackgroundServer() { stop(); }

void BackgroundServer::stop() {
  if (stopped_) return;
  stopped_ = true;
  asio::post(io_, [this] { server_->stop(); });
  thread_.join();
}

}  // namespace glassmsg::net
