#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include <boost/asio/io_context.hpp>
#include <boost/asio/ip/tcp.hpp>

#include "glassmsg/wire.hpp"

namespace glassmsg::net {

// Blocking newline-framed TCP client. Used by tests and small tools.
class LineClient {
 public:
  // Throws boost::system::system_error when the connection is refused.
  LineClient(const std::string& host, std::uint16_t port);

  void send(const WireFrame& f);
  void send_raw(std::string_view bytes);

  // Next complete frame, or nullopt if none arrives within `timeout` or the
  // peer closed the connection.
  std::optional<WireFrame> receive(std::chrono::milliseconds timeout = std::chrono::milliseconds(2000));

  // Reads until a frame of `type` arrives; other frames are discarded.
  std::optional<WireFrame> receive_type(FrameType type,
                                        std::chrono::milliseconds timeout = std::chrono::milliseconds(2000));

  bool closed() const { return closed_; }
  void close();

 private:
  std::optional<std::string> next_line(std::chrono::milliseconds timeout);

  boost::asio::io_context io_;
  boost::asio::ip::tcp::socket socket_;
  std::string buffer_;
  bool closed_ = false;
};

}  // namespace glassmsg::net
