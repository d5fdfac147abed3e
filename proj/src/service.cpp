#include "flatswim/service.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <csignal>
#include <iostream>
#include <set>
#include <thread>

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>

namespace flatswim::service {

using nlohmann::json;
namespace asio = boost::asio;
namespace beast = boost::beast;
namespace websocket = beast::websocket;
using tcp = asio::ip::tcp;

namespace {

json error_message(const std::string& msg) { return {{"type", "error"}, {"msg", msg}}; }

}  // namespace

std::string to_line(const json& message) { return message.dump() + '\n'; }

ServiceCore::ServiceCore(scenario::ScenarioConfig config, double state_rate_hz)
    : sim_(std::move(config)), state_rate_(state_rate_hz) {
    if (!(state_rate_hz > 0.0) || !std::isfinite(state_rate_hz))
        throw std::invalid_argument("service: state rate must be > 0");
}

json ServiceCore::handle(std::string_view line) {
    json msg;
    try {
        msg = json::parse(line);
    } catch (const json::parse_error&) {
        return error_message("malformed JSON");
    }
    if (!msg.is_object()) return error_message("message must be a JSON object");
    const auto type = msg.find("type");
    if (type == msg.end() || !type->is_string()) return error_message("missing string field 'type'");

    if (*type == "cmd") {
        const auto cmd = msg.find("cmd");
        if (cmd == msg.end() || !cmd->is_string()) return error_message("missing string field 'cmd'");
        control::Command command{control::CommandKind::Stop, control::CommandSource::Teleop};
        try {
            command.kind = control::parse_command(cmd->get<std::string>());
            control::active_set_for(command.kind, sim_.model().design.actuator_count);
        } catch (const std::invalid_argument& e) {
            return error_message(e.what());
        }
        std::lock_guard lock(mutex_);
        inbox_.push_back(command);
        return {{"type", "ack"}, {"cmd", control::to_string(command.kind)}, {"t", sim_.time()}};
    }
    if (*type == "light") {
        const auto id = msg.find("id");
        const auto on = msg.find("on");
        if (id == msg.end() || !id->is_number_integer() || id->get<std::int64_t>() < 0)
            return error_message("light: 'id' must be a non-negative integer");
        if (on == msg.end() || !on->is_boolean()) return error_message("light: 'on' must be a boolean");
        const auto index = id->get<std::size_t>();
        std::lock_guard lock(mutex_);
        if (index >= sim_.lights().size()) return error_message("no light with id " + std::to_string(index));
        inbox_.push_back(LightRequest{index, on->get<bool>()});
        return {{"type", "ack"}, {"light", index}, {"on", on->get<bool>()}, {"t", sim_.time()}};
    }
    return error_message("unknown message type '" + type->get<std::string>() + "'");
}

ServiceCore::Step ServiceCore::advance() {
    std::lock_guard lock(mutex_);
    Step step;
    if (sim_.finished()) return step;
    for (const auto& r : inbox_) {
        if (const auto* cmd = std::get_if<control::Command>(&r)) sim_.inject(*cmd);
        else {
            const auto& l = std::get<LightRequest>(r);
            sim_.set_light(l.id, l.on);
        }
    }
    inbox_.clear();
    step.row = sim_.tick();
    const auto slot = static_cast<std::int64_t>(std::floor(sim_.time() * state_rate_ + 1e-9));
    if (slot > last_broadcast_ || sim_.finished()) {
        last_broadcast_ = slot;
        step.state_line = to_line(sim_.state_message());
    }
    return step;
}

bool ServiceCore::finished() const {
    std::lock_guard lock(mutex_);
    return sim_.finished();
}

double ServiceCore::time() const {
    std::lock_guard lock(mutex_);
    return sim_.time();
}

double ServiceCore::dt() const { return sim_.config().dt; }

json ServiceCore::world_message() const {
    std::lock_guard lock(mutex_);
    return sim_.world_message();
}

json ServiceCore::state_message() const {
    std::lock_guard lock(mutex_);
    return sim_.state_message();
}

std::size_t ServiceCore::queued() const {
    std::lock_guard lock(mutex_);
    return inbox_.size();
}

namespace {

constexpr std::size_t kMaxQueuedWrites = 4096;

class Session;

class Hub {
public:
    Hub(scenario::ScenarioConfig config, ServeOptions options)
        : core_(std::move(config), options.state_rate_hz), options_(std::move(options)), acceptor_(ioc_) {
        if (!(options_.speed > 0.0)) throw std::invalid_argument("serve: speed must be > 0");
        beast::error_code ec;
        const auto address = asio::ip::make_address(options_.address, ec);
        if (ec) throw std::runtime_error("serve: bad address '" + options_.address + "'");
        const tcp::endpoint endpoint(address, options_.port);
        acceptor_.open(endpoint.protocol(), ec);
        if (!ec) acceptor_.set_option(asio::socket_base::reuse_address(true), ec);
        if (!ec) acceptor_.bind(endpoint, ec);
        if (!ec) acceptor_.listen(asio::socket_base::max_listen_connections, ec);
        if (ec)
            throw std::runtime_error("serve: cannot bind " + options_.address + ":" + std::to_string(options_.port) +
                                     ": " + ec.message());
        port_ = acceptor_.local_endpoint().port();
    }

    ~Hub() { stop(); }

    std::uint16_t port() const { return port_; }
    ServiceCore& core() { return core_; }

    void start() {
        if (started_.exchange(true)) return;
        do_accept();
        net_thread_ = std::thread([this] { ioc_.run(); });
        tick_thread_ = std::thread([this] { tick_loop(); });
    }

    void stop() {
        {
            std::lock_guard lock(wait_mutex_);
            if (stopping_) return;
            stopping_ = true;
        }
        wait_cv_.notify_all();
        asio::post(ioc_, [this] {
            beast::error_code ec;
            acceptor_.close(ec);
            for (const auto& s : sessions_) close_session(s);
            sessions_.clear();
            work_.reset();
        });
        if (tick_thread_.joinable()) tick_thread_.join();
        if (net_thread_.joinable()) net_thread_.join();
        ioc_.stop();
    }

    void wait() {
        std::unique_lock lock(wait_mutex_);
        wait_cv_.wait(lock, [this] { return stopping_; });
    }

    void join(const std::shared_ptr<Session>& s);
    void leave(const std::shared_ptr<Session>& s) { sessions_.erase(s); }

private:
    void do_accept();
    static void close_session(const std::shared_ptr<Session>& s);

    void broadcast(std::shared_ptr<const std::string> line);

    bool stopping() {
        std::lock_guard lock(wait_mutex_);
        return stopping_;
    }

    void tick_loop() {
        using clock = std::chrono::steady_clock;
        const auto period =
            std::chrono::duration_cast<clock::duration>(std::chrono::duration<double>(core_.dt() / options_.speed));
        auto next = clock::now();
        while (!stopping()) {
            if (core_.finished()) {
                std::this_thread::sleep_for(std::chrono::milliseconds(20));
                continue;
            }
            auto step = core_.advance();
            if (step.state_line) broadcast(std::make_shared<const std::string>(std::move(*step.state_line)));
            next += period;
            const auto now = clock::now();
            if (now - next > std::chrono::milliseconds(250)) next = now;
            std::this_thread::sleep_until(next);
        }
    }

    ServiceCore core_;
    ServeOptions options_;
    asio::io_context ioc_;
    asio::executor_work_guard<asio::io_context::executor_type> work_{ioc_.get_executor()};
    tcp::acceptor acceptor_;
    std::uint16_t port_ = 0;
    std::set<std::shared_ptr<Session>> sessions_;  // network thread only
    std::atomic<bool> started_{false};
    std::mutex wait_mutex_;
    std::condition_variable wait_cv_;
    bool stopping_ = false;
    std::thread net_thread_;
    std::thread tick_thread_;
};

class Session : public std::enable_shared_from_this<Session> {
public:
    Session(tcp::socket socket, Hub& hub) : ws_(std::move(socket)), hub_(hub) {}

    void start() {
        ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
        ws_.async_accept([self = shared_from_this()](beast::error_code ec) { self->on_accept(ec); });
    }

    void send(std::shared_ptr<const std::string> line) {
        if (closed_) return;
        if (queue_.size() >= kMaxQueuedWrites) {
            close();
            return;
        }
        queue_.push_back(std::move(line));
        if (queue_.size() == 1) do_write();
    }

    void close() {
        if (closed_) return;
        closed_ = true;
        beast::error_code ec;
        beast::get_lowest_layer(ws_).socket().shutdown(tcp::socket::shutdown_both, ec);
        beast::get_lowest_layer(ws_).socket().close(ec);
    }

private:
    void on_accept(beast::error_code ec) {
        if (ec) return;
        ws_.text(true);
        hub_.join(shared_from_this());
        do_read();
    }

    void do_read() {
        ws_.async_read(buffer_, [self = shared_from_this()](beast::error_code ec, std::size_t) { self->on_read(ec); });
    }

    void on_read(beast::error_code ec) {
        if (ec) {
            closed_ = true;
            hub_.leave(shared_from_this());
            return;
        }
        const std::string text = beast::buffers_to_string(buffer_.data());
        buffer_.consume(buffer_.size());
        std::size_t begin = 0;
        while (begin <= text.size()) {
            auto end = text.find('\n', begin);
            if (end == std::string::npos) end = text.size();
            const std::string_view line(text.data() + begin, end - begin);
            if (line.find_first_not_of(" \t\r") != std::string_view::npos)
                send(std::make_shared<const std::string>(to_line(hub_.core().handle(line))));
            begin = end + 1;
        }
        do_read();
    }

    void do_write() {
        ws_.async_write(asio::buffer(*queue_.front()),
                        [self = shared_from_this()](beast::error_code ec, std::size_t) { self->on_write(ec); });
    }

    void on_write(beast::error_code ec) {
        if (ec) {
            close();
            hub_.leave(shared_from_this());
            return;
        }
        queue_.pop_front();
        if (!queue_.empty()) do_write();
    }

    websocket::stream<beast::tcp_stream> ws_;
    Hub& hub_;
    beast::flat_buffer buffer_;
    std::deque<std::shared_ptr<const std::string>> queue_;
    bool closed_ = false;
};

void Hub::join(const std::shared_ptr<Session>& s) {
    sessions_.insert(s);
    s->send(std::make_shared<const std::string>(to_line(core_.world_message())));
}

void Hub::do_accept() {
    acceptor_.async_accept(ioc_, [this](beast::error_code ec, tcp::socket socket) {
        if (!acceptor_.is_open()) return;
        if (!ec) std::make_shared<Session>(std::move(socket), *this)->start();
        do_accept();
    });
}

void Hub::close_session(const std::shared_ptr<Session>& s) { s->close(); }

void Hub::broadcast(std::shared_ptr<const std::string> line) {
    asio::post(ioc_, [this, line = std::move(line)] {
        for (const auto& s : std::vector<std::shared_ptr<Session>>(sessions_.begin(), sessions_.end())) s->send(line);
    });
}

}  // namespace

struct Server::Impl : Hub {
    using Hub::Hub;
};

Server::Server(scenario::ScenarioConfig config, ServeOptions options)
    : impl_(std::make_unique<Impl>(std::move(config), std::move(options))) {}

Server::~Server() = default;

std::uint16_t Server::port() const { return impl_->port(); }
void Server::start() { impl_->start(); }
void Server::wait() { impl_->wait(); }
void Server::stop() { impl_->stop(); }
ServiceCore& Server::core() { return impl_->core(); }

void serve(const scenario::ScenarioConfig& config, const ServeOptions& options) {
    Server server(config, options);
    server.start();
    std::cout << "listening on ws://" << options.address << ':' << server.port() << std::endl;
    asio::io_context signals_ioc;
    asio::signal_set signals(signals_ioc, SIGINT, SIGTERM);
    signals.async_wait([&](const beast::error_code&, int) { server.stop(); });
    signals_ioc.run();
    server.stop();
}

}  // namespace flatswim::service
