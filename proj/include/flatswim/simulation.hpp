#pragma once

// Fixed-step simulation loop, telemetry and run summaries.

#include <cstdint>
#include <deque>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "flatswim/control.hpp"
#include "flatswim/dynamics.hpp"
#include "flatswim/scenario.hpp"

namespace flatswim::sim {

struct TelemetryRow {
    double t = 0.0;
    double x = 0.0;
    double y = 0.0;
    double theta = 0.0;
    double vx = 0.0;
    double vy = 0.0;
    double omega = 0.0;
    std::string active_set;  // fin names joined by ';'
    double battery_J = 0.0;
    double power_W = 0.0;

    friend bool operator==(const TelemetryRow&, const TelemetryRow&) = default;
};

struct Summary {
    double duration = 0.0;           // s simulated
    double mean_speed = 0.0;         // m/s, over telemetry rows
    double max_speed = 0.0;
    double mean_abs_omega = 0.0;     // rad/s
    double max_abs_omega = 0.0;
    double distance = 0.0;           // m, path length
    double energy_J = 0.0;           // electrical energy drawn
    double steady_speed = 0.0;       // m/s, mean over the steady window
    double steady_abs_omega = 0.0;   // rad/s
    double body_lengths_per_s = 0.0; // steady speed / body length
    double sizes_per_s = 0.0;        // steady speed / characteristic size
    double final_battery_J = 0.0;
    bool battery_depleted = false;
    std::optional<double> depleted_at;  // s
    bool sunk = false;
};

nlohmann::json to_json(const Summary& s);

/// Summary statistics from telemetry rows. `steady_window` selects the
/// rows with t >= last t − window.
Summary summarize(const std::vector<TelemetryRow>& rows, double steady_window, double body_length,
                  double characteristic_size);

void write_telemetry_csv(const std::filesystem::path& path, const std::vector<TelemetryRow>& rows);
std::vector<TelemetryRow> read_telemetry_csv(const std::filesystem::path& path);
std::string format_row(const TelemetryRow& row);

/// One world with its controller, advanced tick by tick. Commands and
/// light toggles queued between ticks take effect at the start of the next
/// tick. Not thread-safe: one owner calls every member.
class Simulation {
public:
    explicit Simulation(scenario::ScenarioConfig config);

    const scenario::ScenarioConfig& config() const { return config_; }
    const dynamics::World& world() const { return world_; }
    const dynamics::RobotModel& model() const { return model_; }
    double time() const { return static_cast<double>(tick_) * config_.dt; }
    std::int64_t tick_count() const { return tick_; }
    std::int64_t total_ticks() const { return total_ticks_; }
    bool finished() const;

    /// Queues a command. Throws std::invalid_argument when the design lacks the fins.
    void inject(const control::Command& cmd);
    /// Queues a light switch. Throws std::out_of_range for a bad id.
    void set_light(std::size_t id, bool on);

    /// Advances one dt. Returns a telemetry row when this tick lands on the decimation grid.
    std::optional<TelemetryRow> tick();

    TelemetryRow snapshot() const;
    const std::vector<control::LightSource>& lights() const { return lights_; }
    double last_power() const { return last_power_; }
    double energy_J() const { return energy_J_; }
    double distance() const { return distance_; }
    std::optional<double> depleted_at() const { return depleted_at_; }
    double burst_progress() const { return burst_.progress_at(tick_); }
    double burst_remaining() const;
    /// Fin wave phase in [0, 1) while driven, else 0.
    double fin_phase() const;

    /// Live state message for the wire protocol.
    nlohmann::json state_message() const;
    /// Full snapshot sent to new clients.
    nlohmann::json world_message() const;

private:
    void apply_pending();
    void run_controller();

    scenario::ScenarioConfig config_;
    dynamics::RobotModel model_;
    dynamics::World world_;
    std::vector<control::LightSource> lights_;
    std::vector<std::size_t> light_event_index_;
    control::BurstController burst_;
    std::deque<control::Command> pending_commands_;
    std::deque<std::pair<std::size_t, bool>> pending_lights_;
    std::size_t script_index_ = 0;
    std::int64_t tick_ = 0;
    std::int64_t total_ticks_ = 0;
    std::int64_t decimation_ticks_ = 1;
    double last_power_ = 0.0;
    double energy_J_ = 0.0;
    double distance_ = 0.0;
    std::optional<double> depleted_at_;
};

struct RunResult {
    std::vector<TelemetryRow> telemetry;
    Summary summary;
};

/// Runs the scenario to its duration, or until the battery empties when
/// configured to stop there.
RunResult run(const scenario::ScenarioConfig& config);

}  // namespace flatswim::sim
