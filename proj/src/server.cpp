#include "jambeam/server.hpp"

#include <deque>
#include <thread>

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>

namespace jambeam {

namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
namespace net = boost::asio;
using tcp = net::ip::tcp;

namespace {

class EventSession : public std::enable_shared_from_this<EventSession> {
 public:
  EventSession(tcp::socket socket, SessionManager& manager, std::string session_id)
      : ws_(std::move(socket)), manager_(manager), session_id_(std::move(session_id)) {}

  void run(http::request<http::string_body> req) {
    ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
    ws_.async_accept(req, beast::bind_front_handler(&EventSession::on_accept, shared_from_this()));
  }

 private:
  void on_accept(beast::error_code ec) {
    if (ec) return;
    std::weak_ptr<EventSession> weak = shared_from_this();
    auto executor = ws_.get_executor();
    try {
      token_ = manager_.subscribe(session_id_, [weak, executor](const std::string& message) {
        net::post(executor, [weak, message] {
          if (auto self = weak.lock()) self->send(message);
        });
      });
      subscribed_ = true;
    } catch (const std::exception& e) {
      send(error_json(e).dump());
      closing_ = true;
    }
    do_read();
  }

  void send(const std::string& message) {
    queue_.push_back(message);
    if (queue_.size() == 1) do_write();
  }

  void do_write() {
    ws_.text(true);
    ws_.async_write(net::buffer(queue_.front()), beast::bind_front_handler(&EventSession::on_write, shared_from_this()));
  }

  void on_write(beast::error_code ec, std::size_t) {
    if (ec) return finish();
    queue_.pop_front();
    if (!queue_.empty()) return do_write();
    if (closing_) {
      ws_.async_close(websocket::close_code::policy_error, [self = shared_from_this()](beast::error_code) {});
    }
  }

  // Inbound frames are ignored; the read loop only notices the close.
  void do_read() {
    ws_.async_read(buffer_, beast::bind_front_handler(&EventSession::on_read, shared_from_this()));
  }

  void on_read(beast::error_code ec, std::size_t) {
    if (ec) return finish();
    buffer_.consume(buffer_.size());
    do_read();
  }

  void finish() {
    if (subscribed_) manager_.unsubscribe(session_id_, token_);
    subscribed_ = false;
  }

  websocket::stream<beast::tcp_stream> ws_;
  SessionManager& manager_;
  std::string session_id_;
  beast::flat_buffer buffer_;
  std::deque<std::string> queue_;
  std::uint64_t token_ = 0;
  bool subscribed_ = false;
  bool closing_ = false;
};

class HttpSession : public std::enable_shared_from_this<HttpSession> {
 public:
  HttpSession(tcp::socket socket, SessionManager& manager) : stream_(std::move(socket)), manager_(manager) {}

  void run() { do_read(); }

 private:
  void do_read() {
    req_ = {};
    stream_.expires_after(std::chrono::seconds(60));
    http::async_read(stream_, buffer_, req_, beast::bind_front_handler(&HttpSession::on_read, shared_from_this()));
  }

  void on_read(beast::error_code ec, std::size_t) {
    if (ec) {
      stream_.socket().shutdown(tcp::socket::shutdown_send, ec);
      return;
    }
    if (websocket::is_upgrade(req_)) {
      const std::string target(req_.target());
      if (const auto id = events_target(target)) {
        stream_.expires_never();
        std::make_shared<EventSession>(stream_.release_socket(), manager_, *id)->run(std::move(req_));
        return;
      }
    }
    const HttpReply reply =
        handle_request(manager_, std::string(req_.method_string()), std::string(req_.target()), req_.body());
    res_ = {};
    res_.version(req_.version());
    res_.result(static_cast<http::status>(reply.status));
    res_.set(http::field::content_type, "application/json");
    res_.keep_alive(req_.keep_alive());
    res_.body() = reply.body.dump();
    res_.prepare_payload();
    http::async_write(stream_, res_, beast::bind_front_handler(&HttpSession::on_write, shared_from_this()));
  }

  void on_write(beast::error_code ec, std::size_t) {
    if (ec) return;
    if (!res_.keep_alive()) {
      stream_.socket().shutdown(tcp::socket::shutdown_send, ec);
      return;
    }
    do_read();
  }

  beast::tcp_stream stream_;
  SessionManager& manager_;
  beast::flat_buffer buffer_;
  http::request<http::string_body> req_;
  http::response<http::string_body> res_;
};

}  // namespace

struct GatewayServer::Impl {
  SessionManager& manager;
  net::io_context ioc{1};
  tcp::acceptor acceptor{ioc};
  std::thread thread;

  explicit Impl(SessionManager& m) : manager(m) {}

  void do_accept() {
    acceptor.async_accept(net::make_strand(ioc), [this](beast::error_code ec, tcp::socket socket) {
      if (!ec) std::make_shared<HttpSession>(std::move(socket), manager)->run();
      if (acceptor.is_open()) do_accept();
    });
  }
};

GatewayServer::GatewayServer(SessionManager& manager, const std::string& address, std::uint16_t port)
    : impl_(std::make_unique<Impl>(manager)) {
  const tcp::endpoint endpoint{net::ip::make_address(address), port};
  impl_->acceptor.open(endpoint.protocol());
  impl_->acceptor.set_option(net::socket_base::reuse_address(true));
  impl_->acceptor.bind(endpoint);
  impl_->acceptor.listen(net::socket_base::max_listen_connections);
  impl_->do_accept();
}

GatewayServer::~GatewayServer() { stop(); }

void GatewayServer::start() {
  if (impl_->thread.joinable()) return;
  impl_->thread = std::thread([this] { impl_->ioc.run(); });
}

void GatewayServer::run() { impl_->ioc.run(); }

void GatewayServer::stop() {
  impl_->ioc.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

std::uint16_t GatewayServer::port() const { return impl_->acceptor.local_endpoint().port(); }

}  // namespace jambeam
