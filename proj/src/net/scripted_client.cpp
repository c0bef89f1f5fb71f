#include "glassmsg/net/scripted_client.hpp"

#include <stdexcept>

#include <boost/asio/connect.hpp>
#include <boost/asio/io_context.hpp>
#include <boost/asio/ip/tcp.hpp>
#include <boost/asio/read_until.hpp>
#include <boost/asio/steady_timer.hpp>
#include <boost/asio/streambuf.hpp>
#include <boost/asio/write.hpp>

namespace glassmsg::net {

namespace asio = boost::asio;
using tcp = asio::ip::tcp;

namespace {

class ScriptedClient {
 public:
  ScriptedClient(const ClientOptions& opts, const InputTrace& trace)
      : opts_(opts), trace_(trace), socket_(io_), timer_(io_), session_(make_config(opts, trace), trace.header.contacts) {}

  ClientResult run() {
    tcp::resolver resolver(io_);
    asio::connect(socket_, resolver.resolve(opts_.host, std::to_string(opts_.port)));
    socket_.set_option(tcp::no_delay(true));
    write(WireFrame{.type = FrameType::Hello, .from = opts_.name});
    await_hello_ack();

    start_ = std::chrono::steady_clock::now();
    read();
    schedule_next();
    io_.run();

    ClientResult out{session_.state(), session_.log(), {}, std::move(received_)};
    out.report = compute_report(out.log, trace_.header);
    return out;
  }

 private:
  static SessionConfig make_config(const ClientOptions& opts, const InputTrace& trace) {
    SessionConfig cfg;
    cfg.silence_gap_ms = opts.silence_gap_ms.value_or(trace.header.silence_gap_ms);
    cfg.self_name = opts.name;
    return cfg;
  }

  std::int64_t trace_clock() const {
    const auto wall = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
    return static_cast<std::int64_t>(wall * opts_.speed);
  }

  void await_hello_ack() {
    while (true) {
      asio::read_until(socket_, inbox_, '\n');
      auto f = take_frame();
      if (!f) continue;
      if (f->type == FrameType::HelloAck) return;
      if (f->type == FrameType::Err) throw std::runtime_error("registration refused: " + f->body);
      received_.push_back(*f);
    }
  }

  std::optional<WireFrame> take_frame() {
    std::istream in(&inbox_);
    std::string line;
    std::getline(in, line);
    try {
      return decode(line);
    } catch (const FrameError&) {
      return std::nullopt;
    }
  }

  void write(const WireFrame& f) {
    boost::system::error_code ec;
    asio::write(socket_, asio::buffer(encode(f)), ec);
  }

  void read() {
    asio::async_read_until(socket_, inbox_, '\n', [this](boost::system::error_code ec, std::size_t) {
      if (ec) return;
      if (auto f = take_frame()) on_frame(*f);
      read();
    });
  }

  void on_frame(const WireFrame& f) {
    received_.push_back(f);
    if (f.type != FrameType::Msg || f.to != opts_.name) return;
    const std::int64_t now = std::max(trace_clock(), session_.state().clock_ms);
    session_.incoming(Message{f.id, f.from, f.to, f.body, f.ts}, now);
  }

  void schedule_next() {
    while (next_ < trace_.events.size() && std::holds_alternative<Message>(trace_.events[next_].payload)) ++next_;
    if (next_ == trace_.events.size()) {
      timer_.expires_after(opts_.linger);
      timer_.async_wait([this](boost::system::error_code) { finish(); });
      return;
    }
    const auto& ev = trace_.events[next_];
    const auto offset = std::chrono::duration<double, std::milli>(static_cast<double>(ev.t_ms) / opts_.speed);
    timer_.expires_at(start_ + std::chrono::duration_cast<std::chrono::steady_clock::duration>(offset));
    timer_.async_wait([this](boost::system::error_code ec) {
      if (ec) return;
      const auto& e = trace_.events[next_++];
      const std::int64_t now = std::max(e.t_ms, session_.state().clock_ms);
      for (const auto& fx : dispatch(session_, e.payload, now)) {
        if (const auto* s = std::get_if<effect::SendMessage>(&fx)) {
          write(WireFrame{.type = FrameType::Msg,
                          .id = s->message.id,
                          .from = opts_.name,
                          .to = s->message.recipient,
                          .body = s->message.body});
        }
      }
      schedule_next();
    });
  }

  void finish() {
    boost::system::error_code ec;
    socket_.shutdown(tcp::socket::shutdown_both, ec);
    socket_.close(ec);
  }

  const ClientOptions& opts_;
  const InputTrace& trace_;
  asio::io_context io_;
  tcp::socket socket_;
  asio::steady_timer timer_;
  asio::streambuf inbox_;
  Session session_;
  std::vector<WireFrame> received_;
  std::chrono::steady_clock::time_point start_;
  std::size_t next_ = 0;
};

}  // namespace

ClientResult run_scripted_client(const ClientOptions& opts, const InputTrace& trace) {
  if (opts.speed <= 0) throw std::invalid_argument("speed must be positive");
  ScriptedClient client(opts, trace);
  return client.run();
}

}  // namespace glassmsg::net
