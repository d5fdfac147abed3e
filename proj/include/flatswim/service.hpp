#pragma once

// Live simulation over WebSocket, one JSON object per line.

#include <cstdint>
#include <deque>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include <json.hpp>

#include "flatswim/simulation.hpp"

namespace flatswim::service {

inline constexpr double kDefaultStateRate = 30.0;  // Hz of sim time

/// Network-free core: validates client lines, queues accepted requests and
/// advances the simulation. Requests queued before advance() take effect on
/// that tick. Thread-safe.
class ServiceCore {
public:
    explicit ServiceCore(scenario::ScenarioConfig config, double state_rate_hz = kDefaultStateRate);

    /// Reply to one client line: {"type":"ack",...} or {"type":"error","msg":..}.
    nlohmann::json handle(std::string_view line);

    struct Step {
        std::optional<sim::TelemetryRow> row;
        std::optional<std::string> state_line;  // serialized state when a broadcast is due
    };
    /// One tick. Returns an empty step once the run has finished.
    Step advance();

    bool finished() const;
    double time() const;
    double dt() const;
    nlohmann::json world_message() const;
    nlohmann::json state_message() const;
    std::size_t queued() const;

private:
    struct LightRequest {
        std::size_t id;
        bool on;
    };
    using Request = std::variant<control::Command, LightRequest>;

    mutable std::mutex mutex_;
    sim::Simulation sim_;
    std::deque<Request> inbox_;
    double state_rate_;
    std::int64_t last_broadcast_ = -1;
};

/// Serialized form of one message: compact JSON plus '\n'.
std::string to_line(const nlohmann::json& message);

struct ServeOptions {
    std::string address = "127.0.0.1";
    std::uint16_t port = 8765;            // 0 picks a free port
    double state_rate_hz = kDefaultStateRate;
    double speed = 1.0;                   // sim seconds per wall second
};

/// WebSocket endpoint. New clients get the world message, then every state
/// broadcast. One thread ticks the simulation against the wall clock and
/// one thread runs the network.
class Server {
public:
    /// Binds immediately. Throws std::runtime_error when the port is taken.
    Server(scenario::ScenarioConfig config, ServeOptions options = {});
    ~Server();
    Server(const Server&) = delete;
    Server& operator=(const Server&) = delete;

    std::uint16_t port() const;
    /// Starts the tick and network threads.
    void start();
    /// Blocks until stop() from another thread or a signal handler.
    void wait();
    void stop();
    ServiceCore& core();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Runs a server in the foreground until SIGINT or SIGTERM.
void serve(const scenario::ScenarioConfig& config, const ServeOptions& options);

}  // namespace flatswim::service
