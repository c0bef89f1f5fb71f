#include "glassmsg/net/line_client.hpp"

#include <poll.h>

#include <boost/asio/connect.hpp>
#include <boost/asio/write.hpp>

namespace glassmsg::net {

namespace asio = boost::asio;
using tcp = asio::ip::tcp;

LineClient::LineClient(const std::string& host, std::uint16_t port) : socket_(io_) {
  tcp::resolver resolver(io_);
  asio::connect(socket_, resolver.resolve(host, std::to_string(port)));
  socket_.set_option(tcp::no_delay(true));
}

void LineClient::send(const WireFrame& f) { send_raw(encode(f)); }

void LineClient::send_raw(std::string_view bytes) { asio::write(socket_, asio::buffer(bytes.data(), bytes.size())); }

std::optional<std::string> LineClient::next_line(std::chrono::milliseconds timeout) {
  const auto deadline = std::chrono::steady_clock::now() + timeout;
  while (true) {
    if (auto nl = buffer_.find('\n'); nl != std::string::npos) {
      std::string line = buffer_.substr(0, nl + 1);
      buffer_.erase(0, nl + 1);
      return line;
    }
    if (closed_) return std::nullopt;

    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now());
    if (left.count() <= 0) return std::nullopt;
    pollfd pfd{socket_.native_handle(), POLLIN, 0};
    if (::poll(&pfd, 1, static_cast<int>(left.count())) <= 0) return std::nullopt;

    char chunk[8192];
    boost::system::error_code ec;
    const std::size_t n = socket_.read_some(asio::buffer(chunk), ec);
    if (ec) {
      closed_ = true;
      continue;
    }
    buffer_.append(chunk, n);
  }
}

std::optional<WireFrame> LineClient::receive(std::chrono::milliseconds timeout) {
  auto line = next_line(timeout);
  if (!line) return std::nullopt;
  return decode(*line);
}

std::optional<WireFrame> LineClient::receive_type(FrameType type, std::chrono::milliseconds timeout) {
  const auto deadline = std::chrono::steady_clock::now() + timeout;
  while (true) {
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now());
    if (left.count() <= 0) return std::nullopt;
    auto f = receive(left);
    if (!f) return std::nullopt;
    if (f->type == type) return f;
  }
}

void LineClient::close() {
  boost::system::error_code ec;
  socket_.shutdown(tcp::socket::shutdown_both, ec);
  socket_.close(ec);
  closed_ = true;
}

}  // namespace glassmsg::net
