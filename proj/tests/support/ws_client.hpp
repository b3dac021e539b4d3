#pragma once

// Minimal synchronous WebSocket client for service tests.

#include <chrono>
#include <string>
#include <vector>

#include <boost/asio/connect.hpp>
#include <boost/asio/ip/tcp.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>

namespace testing_ws {

class Client {
 public:
  Client(const std::string& host, unsigned short port) : resolver_(ioc_), ws_(ioc_) {
    auto results = resolver_.resolve(host, std::to_string(port));
    boost::asio::connect(ws_.next_layer(), results.begin(), results.end());
    ws_.handshake(host + ":" + std::to_string(port), "/");
    ws_.text(true);
  }

  ~Client() {
    boost::beast::error_code ec;
    ws_.close(boost::beast::websocket::close_code::normal, ec);
  }

  void send(const std::string& text) {
    ws_.text(true);
    ws_.write(boost::asio::buffer(text));
  }

  void send_binary(const std::string& bytes) {
    ws_.binary(true);
    ws_.write(boost::asio::buffer(bytes));
    ws_.text(true);
  }

  std::string receive() {
    boost::beast::flat_buffer buffer;
    ws_.read(buffer);
    return boost::beast::buffers_to_string(buffer.data());
  }

  /// Sends one frame and reads exactly `replies` frames back.
  std::vector<std::string> exchange(const std::string& text, std::size_t replies) {
    send(text);
    std::vector<std::string> out;
    for (std::size_t i = 0; i < replies; ++i) out.push_back(receive());
    return out;
  }

 private:
  boost::asio::io_context ioc_;
  boost::asio::ip::tcp::resolver resolver_;
  boost::beast::websocket::stream<boost::asio::ip::tcp::socket> ws_;
};

}  // namespace testing_ws
