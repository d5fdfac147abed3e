#pragma once

// Scenario configuration: robot builds, world layout, controller and drive.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "flatswim/control.hpp"
#include "flatswim/drive.hpp"
#include "flatswim/dynamics.hpp"
#include "flatswim/thrust.hpp"

namespace flatswim::scenario {

/// Validation failure tied to a location in the config, e.g. "obstacles[2].position".
class ConfigError : public std::invalid_argument {
public:
    ConfigError(std::string path, const std::string& message)
        : std::invalid_argument(path + ": " + message), path_(std::move(path)) {}
    const std::string& path() const { return path_; }

private:
    std::string path_;
};

struct Build {
    std::string name;
    thrust::ModuleDesign design;
    std::string calibration;  // anchor set name
    bool battery_powered = false;
    bool flotation = false;
    double body_length = 0.045;          // m
    double characteristic_size = 0.055;  // m
    DriveSpec drive;
    double battery_capacity_mAh = 30.0;
    double battery_voltage = 3.7;
};

struct BuildCatalog {
    std::map<std::string, Build> builds;

    const Build& at(const std::string& name) const;
    /// First build with this design, or nullptr.
    const Build* find(const thrust::ModuleDesign& design) const;
    static BuildCatalog from_json(const nlohmann::json& j);
    static BuildCatalog load(const std::filesystem::path& path);
    static const BuildCatalog& bundled();
};

struct LightEvent {
    double t = 0.0;
    bool on = true;
};

struct LightConfig {
    control::LightSource source;
    Vec2 velocity;                   // m/s
    std::vector<LightEvent> schedule;  // sorted by t
};

struct ScriptEntry {
    double t = 0.0;
    control::CommandKind cmd = control::CommandKind::Stop;
    std::optional<double> duration;  // s; teleop burst when absent
};

enum class ControllerMode { Script, Teleop, Phototaxis };

std::string_view to_string(ControllerMode mode);

struct ControllerConfig {
    ControllerMode mode = ControllerMode::Script;
    std::vector<ScriptEntry> script;  // sorted by t
    control::TeleopConfig teleop;
    control::PhototaxisConfig phototaxis;
};

struct BatteryConfig {
    double capacity_mAh = 30.0;
    double voltage = 3.7;
    double initial_fraction = 1.0;
    bool stop_when_empty = true;

    double capacity_J() const { return capacity_mAh * 3.6 * voltage; }
};

struct ScenarioConfig {
    std::string name;
    std::string description;
    std::uint64_t seed = 0;
    double dt = 1e-3;
    double duration = 10.0;
    dynamics::Arena arena;

    Build build;
    dynamics::DynamicsParams dynamics;  // calibrated, then overridden
    Vec2 position;
    double heading = 0.0;     // rad
    double payload_kg = 0.0;

    DriveSpec drive;
    /// Bundled thrust calibration with the scenario's anchor overrides applied.
    thrust::ThrustCalibration thrust = thrust::ThrustCalibration::bundled();
    BatteryConfig battery;
    std::vector<dynamics::Obstacle> obstacles;
    std::vector<LightConfig> lights;
    ControllerConfig controller;
    double telemetry_decimation = 0.01;  // s
    double steady_window = 2.0;          // s
    unsigned workers = 1;

    /// Re-checks every invariant, throwing ConfigError.
    void validate() const;
};

/// Parses and validates a scenario, filling defaults. Unknown keys are
/// rejected. Errors carry the JSON path of the offending field.
ScenarioConfig parse_scenario(const nlohmann::json& j, const BuildCatalog& builds = BuildCatalog::bundled());
ScenarioConfig load_scenario(const std::filesystem::path& path, const BuildCatalog& builds = BuildCatalog::bundled());

/// Bundled scenario by name (data/scenarios/<name>.json) or a file path.
std::filesystem::path resolve_scenario(const std::string& name_or_path);
std::vector<std::string> bundled_scenarios();

/// Canonical JSON of a resolved config.
nlohmann::json to_json(const ScenarioConfig& config);

}  // namespace flatswim::scenario
