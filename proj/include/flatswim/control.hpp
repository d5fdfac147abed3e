#pragma once

// Teleoperation bursts and the phototaxis controller.

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>

#include "flatswim/dynamics.hpp"
#include "flatswim/geometry.hpp"
#include "flatswim/thrust.hpp"

namespace flatswim::control {

enum class CommandKind { Forward, Backward, TurnLeft, TurnRight, SideLeft, SideRight, RotateCw, RotateCcw, Stop };
enum class CommandSource { Teleop, Autonomy, Script };

struct Command {
    CommandKind kind = CommandKind::Stop;
    CommandSource source = CommandSource::Teleop;
};

std::string_view to_string(CommandKind kind);
/// Accepts the snake_case names ("forward", "turn_left", ...). Throws std::invalid_argument.
CommandKind parse_command(std::string_view name);
std::string_view to_string(CommandSource source);

/// Backward, side and rotate commands need the rear fins.
bool requires_four_actuators(CommandKind kind);

/// Fins driven by a command. Throws std::invalid_argument when the design
/// lacks the fins.
dynamics::ActiveSet active_set_for(CommandKind kind, int actuator_count);

struct ActivationPlan {
    dynamics::ActiveSet active;
    double duration = 0.0;  // s
};

struct TeleopConfig {
    double burst_s = 0.5;
    void validate() const;
};

ActivationPlan teleop_step(const Command& cmd, const thrust::ModuleDesign& design, const TeleopConfig& config = {});

/// Holds the current burst in whole ticks. A new plan replaces the running
/// one immediately.
class BurstController {
public:
    void start(const ActivationPlan& plan, std::int64_t tick, double dt);
    dynamics::ActiveSet active_at(std::int64_t tick) const;
    bool busy_at(std::int64_t tick) const { return tick < end_tick_; }
    std::int64_t end_tick() const { return end_tick_; }
    /// Burst progress in [0, 1] for display; 0 when idle.
    double progress_at(std::int64_t tick) const;

private:
    dynamics::ActiveSet active_;
    std::int64_t start_tick_ = 0;
    std::int64_t end_tick_ = 0;
};

struct LightSource {
    Vec2 position;
    double radiant_power = 1.0;
    bool on = true;
    void validate() const;
};

enum class Sensor { Front = 0, Right = 1, Back = 2, Left = 3 };

struct SensorPose {
    Vec2 position;
    Vec2 normal;  // unit, outward
};

/// Four phototransistors on the body rim facing 0°, −90°, 180° and +90°
/// from the heading, in (front, right, back, left) order.
std::array<SensorPose, 4> sensor_poses(Vec2 position, double heading, double mount_radius);

inline constexpr double kDefaultMinDistance = 1e-3;  // m

/// Lambertian point source: power/d² · max(0, cos θ). Distances below
/// `min_distance` are clamped. Off sources read 0.
double sensor_reading(const SensorPose& pose, const LightSource& source, double min_distance = kDefaultMinDistance);
double sensor_reading(const SensorPose& pose, std::span<const LightSource> sources,
                      double min_distance = kDefaultMinDistance);

std::array<double, 4> read_sensors(Vec2 position, double heading, double mount_radius,
                                   std::span<const LightSource> sources, double min_distance = kDefaultMinDistance);

struct PhototaxisConfig {
    double deadband = 1.1;         // max/front ratio needed to turn
    double forward_burst_s = 0.2;
    double turn_burst_s = 0.2;
    double min_distance = kDefaultMinDistance;
    void validate() const;
};

/// Argmax steering over (front, right, back, left). Ties go front, left,
/// right, back. Turning needs the brightest reading to exceed the front by
/// the deadband ratio. A brightest back sensor turns toward the brighter
/// side, left on a tie. All-dark readings give stop.
Command phototaxis_policy(const std::array<double, 4>& readings, const PhototaxisConfig& config = {});

}  // namespace flatswim::control
