#pragma once

// WebSocket front end: one Session per connection, one JSON object per text
// frame, optional per-session JSON Lines recording.

#include <sys/socket.h>

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <boost/asio/ip/tcp.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>

#include "tactilemap/session.hpp"

namespace tactilemap {

class ServiceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ServiceConfig {
  std::string address = "127.0.0.1";
  unsigned short port = 0;  // 0 picks an ephemeral port
  EngineConfig engine;
  std::optional<std::filesystem::path> record_dir;
};

class SessionService {
 public:
  SessionService(ServiceConfig config, std::shared_ptr<const MapCatalog> catalog)
      : config_(std::move(config)), catalog_(std::move(catalog)) {}

  SessionService(const SessionService&) = delete;
  SessionService& operator=(const SessionService&) = delete;
  ~SessionService() { stop(); }

  /// Binds and starts accepting. Throws ServiceError when the address is unusable.
  void start() {
    namespace net = boost::asio;
    using tcp = net::ip::tcp;
    if (accept_thread_.joinable()) return;
    if (config_.record_dir) {
      std::error_code ec;
      std::filesystem::create_directories(*config_.record_dir, ec);
      if (ec) throw ServiceError("cannot create record directory: " + ec.message());
    }
    boost::system::error_code ec;
    const auto address = net::ip::make_address(config_.address, ec);
    if (ec) throw ServiceError("bad address '" + config_.address + "': " + ec.message());
    acceptor_.emplace(ioc_);
    const tcp::endpoint endpoint{address, config_.port};
    acceptor_->open(endpoint.protocol(), ec);
    if (!ec) acceptor_->set_option(net::socket_base::reuse_address(true), ec);
    if (!ec) acceptor_->bind(endpoint, ec);
    if (!ec) acceptor_->listen(net::socket_base::max_listen_connections, ec);
    if (ec) {
      acceptor_.reset();
      throw ServiceError("cannot listen on " + config_.address + ":" + std::to_string(config_.port) + ": " +
                         ec.message());
    }
    port_ = acceptor_->local_endpoint().port();
    stopping_ = false;
    accept_thread_ = std::thread([this] { accept_loop(); });
  }

  unsigned short port() const { return port_; }

  std::size_t sessions_started() const { return sessions_started_.load(); }

  /// Closes the listener and every live connection, then joins all threads.
  void stop() {
    if (!accept_thread_.joinable()) return;
    stopping_ = true;
    ::shutdown(acceptor_->native_handle(), SHUT_RDWR);
    accept_thread_.join();
    std::vector<Worker> workers;
    {
      std::lock_guard lock(mu_);
      for (auto& w : workers_)
        if (!w.done->load()) ::shutdown(w.fd, SHUT_RDWR);
      workers = std::move(workers_);
      workers_.clear();
    }
    for (auto& w : workers) w.thread.join();
    boost::system::error_code ec;
    acceptor_->close(ec);
    acceptor_.reset();
  }

 private:
  struct Worker {
    std::thread thread;
    std::shared_ptr<std::atomic<bool>> done;
    int fd = -1;
  };

  void accept_loop() {
    using tcp = boost::asio::ip::tcp;
    while (!stopping_) {
      tcp::socket socket(ioc_);
      boost::system::error_code ec;
      acceptor_->accept(socket, ec);
      if (ec) {
        if (stopping_) break;
        continue;
      }
      const std::size_t n = ++sessions_started_;
      auto done = std::make_shared<std::atomic<bool>>(false);
      const int fd = socket.native_handle();
      std::lock_guard lock(mu_);
      reap_finished();
      workers_.push_back({std::thread([this, s = std::move(socket), n, done]() mutable {
                            run_session(std::move(s), n);
                            done->store(true);
                          }),
                          done, fd});
    }
  }

  void reap_finished() {
    for (auto it = workers_.begin(); it != workers_.end();) {
      if (it->done->load()) {
        it->thread.join();
        it = workers_.erase(it);
      } else {
        ++it;
      }
    }
  }

  void run_session(boost::asio::ip::tcp::socket socket, std::size_t n) {
    namespace beast = boost::beast;
    namespace websocket = beast::websocket;
    websocket::stream<boost::asio::ip::tcp::socket> ws{std::move(socket)};
    beast::error_code ec;
    ws.accept(ec);
    if (ec) return;

    std::ofstream record_file;
    Session::RecordObserver observer;
    if (config_.record_dir) {
      char name[32];
      std::snprintf(name, sizeof name, "session-%04zu.jsonl", n);
      record_file.open(*config_.record_dir / name, std::ios::out | std::ios::trunc);
      observer = [&record_file](const LogRecord& r) {
        record_file << to_json(r).dump() << '\n';
        record_file.flush();
      };
    }
    Session session(config_.engine, catalog_, std::move(observer));

    for (;;) {
      beast::flat_buffer buffer;
      ws.read(buffer, ec);
      if (ec) break;
      std::vector<ServerMessage> replies;
      if (!ws.got_text())
        replies.push_back(ErrorMessage{std::string(error_code::bad_frame), "binary frames are not accepted"});
      else
        replies = session.handle_frame(beast::buffers_to_string(buffer.data()));
      ws.text(true);
      for (const auto& r : replies) {
        ws.write(boost::asio::buffer(to_frame(r)), ec);
        if (ec) return;
      }
    }
  }

  ServiceConfig config_;
  std::shared_ptr<const MapCatalog> catalog_;
  boost::asio::io_context ioc_;
  std::optional<boost::asio::ip::tcp::acceptor> acceptor_;
  std::thread accept_thread_;
  std::atomic<bool> stopping_{false};
  std::atomic<std::size_t> sessions_started_{0};
  unsigned short port_ = 0;
  std::mutex mu_;
  std::vector<Worker> workers_;
};

}  // namespace tactilemap
