#include "flatswim/control.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace flatswim::control {

using dynamics::ActiveSet;
using dynamics::FinId;

namespace {

struct KindName {
    CommandKind kind;
    std::string_view name;
};

constexpr KindName kKindNames[] = {
    {CommandKind::Forward, "forward"},       {CommandKind::Backward, "backward"},
    {CommandKind::TurnLeft, "turn_left"},    {CommandKind::TurnRight, "turn_right"},
    {CommandKind::SideLeft, "side_left"},    {CommandKind::SideRight, "side_right"},
    {CommandKind::RotateCw, "rotate_cw"},    {CommandKind::RotateCcw, "rotate_ccw"},
    {CommandKind::Stop, "stop"},
};

}  // namespace

std::string_view to_string(CommandKind kind) {
    for (const auto& kn : kKindNames)
        if (kn.kind == kind) return kn.name;
    return "?";
}

CommandKind parse_command(std::string_view name) {
    for (const auto& kn : kKindNames)
        if (kn.name == name) return kn.kind;
    throw std::invalid_argument("unknown command '" + std::string(name) + "'");
}

std::string_view to_string(CommandSource source) {
    switch (source) {
        case CommandSource::Teleop: return "teleop";
        case CommandSource::Autonomy: return "autonomy";
        case CommandSource::Script: return "script";
    }
    return "?";
}

bool requires_four_actuators(CommandKind kind) {
    switch (kind) {
        case CommandKind::Backward:
        case CommandKind::SideLeft:
        case CommandKind::SideRight:
        case CommandKind::RotateCw:
        case CommandKind::RotateCcw: return true;
        default: return false;
    }
}

ActiveSet active_set_for(CommandKind kind, int actuator_count) {
    if (requires_four_actuators(kind) && actuator_count != 4)
        throw std::invalid_argument("command '" + std::string(to_string(kind)) + "' needs a 4-actuator design");
    switch (kind) {
        case CommandKind::Forward: return {FinId::FrontLeft, FinId::FrontRight};
        case CommandKind::Backward: return {FinId::RearLeft, FinId::RearRight};
        case CommandKind::TurnLeft: return {FinId::FrontRight};
        case CommandKind::TurnRight: return {FinId::FrontLeft};
        case CommandKind::SideLeft: return {FinId::FrontRight, FinId::RearRight};
        case CommandKind::SideRight: return {FinId::FrontLeft, FinId::RearLeft};
        case CommandKind::RotateCcw: return {FinId::FrontRight, FinId::RearLeft};
        case CommandKind::RotateCw: return {FinId::FrontLeft, FinId::RearRight};
        case CommandKind::Stop: return {};
    }
    return {};
}

void TeleopConfig::validate() const {
    if (!(burst_s > 0.0)) throw std::invalid_argument("teleop: burst_s must be > 0");
}

ActivationPlan teleop_step(const Command& cmd, const thrust::ModuleDesign& design, const TeleopConfig& config) {
    config.validate();
    const ActiveSet set = active_set_for(cmd.kind, design.actuator_count);
    if (cmd.kind == CommandKind::Stop) return {set, 0.0};
    return {set, config.burst_s};
}

void BurstController::start(const ActivationPlan& plan, std::int64_t tick, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("burst: dt must be > 0");
    active_ = plan.active;
    start_tick_ = tick;
    end_tick_ = tick + static_cast<std::int64_t>(std::llround(plan.duration / dt));
}

ActiveSet BurstController::active_at(std::int64_t tick) const {
    return tick >= start_tick_ && tick < end_tick_ ? active_ : ActiveSet{};
}

double BurstController::progress_at(std::int64_t tick) const {
    if (!busy_at(tick) || end_tick_ <= start_tick_) return 0.0;
    return static_cast<double>(tick - start_tick_) / static_cast<double>(end_tick_ - start_tick_);
}

void LightSource::validate() const {
    if (!(radiant_power >= 0.0)) throw std::invalid_argument("light: radiant_power must be >= 0");
}

std::array<SensorPose, 4> sensor_poses(Vec2 position, double heading, double mount_radius) {
    std::array<SensorPose, 4> out;
    // front, right, back, left
    constexpr double offsets[] = {0.0, -0.5, 1.0, 0.5};
    for (std::size_t i = 0; i < 4; ++i) {
        const double a = heading + offsets[i] * std::numbers::pi;
        const Vec2 n{std::cos(a), std::sin(a)};
        out[i] = {position + n * mount_radius, n};
    }
    return out;
}

double sensor_reading(const SensorPose& pose, const LightSource& source, double min_distance) {
    if (!source.on) return 0.0;
    const Vec2 d = source.position - pose.position;
    const double dist = norm(d);
    const double r = std::max(dist, min_distance);
    // A source sitting on the sensor counts as on-axis.
    const double cos_theta = dist > 0.0 ? dot(d, pose.normal) / dist : 1.0;
    return source.radiant_power / (r * r) * std::max(0.0, cos_theta);
}

double sensor_reading(const SensorPose& pose, std::span<const LightSource> sources, double min_distance) {
    double sum = 0.0;
    for (const auto& s : sources) sum += sensor_reading(pose, s, min_distance);
    return sum;
}

std::array<double, 4> read_sensors(Vec2 position, double heading, double mount_radius,
                                   std::span<const LightSource> sources, double min_distance) {
    const auto poses = sensor_poses(position, heading, mount_radius);
    std::array<double, 4> out{};
    for (std::size_t i = 0; i < 4; ++i) out[i] = sensor_reading(poses[i], sources, min_distance);
    return out;
}

void PhototaxisConfig::validate() const {
    if (!(deadband >= 1.0)) throw std::invalid_argument("phototaxis: deadband must be >= 1");
    if (!(forward_burst_s > 0.0) || !(turn_burst_s > 0.0))
        throw std::invalid_argument("phototaxis: burst durations must be > 0");
    if (!(min_distance > 0.0)) throw std::invalid_argument("phototaxis: min_distance must be > 0");
}

Command phototaxis_policy(const std::array<double, 4>& readings, const PhototaxisConfig& config) {
    const auto at = [&](Sensor s) { return readings[static_cast<std::size_t>(s)]; };
    constexpr Sensor priority[] = {Sensor::Front, Sensor::Left, Sensor::Right, Sensor::Back};
    Sensor best = Sensor::Front;
    for (Sensor s : priority)
        if (at(s) > at(best)) best = s;

    Command cmd{CommandKind::Forward, CommandSource::Autonomy};
    if (!(at(best) > 0.0)) {
        cmd.kind = CommandKind::Stop;
        return cmd;
    }
    if (best == Sensor::Front || !(at(best) > config.deadband * at(Sensor::Front))) return cmd;
    switch (best) {
        case Sensor::Left: cmd.kind = CommandKind::TurnLeft; break;
        case Sensor::Right: cmd.kind = CommandKind::TurnRight; break;
        default:
            cmd.kind = at(Sensor::Left) >= at(Sensor::Right) ? CommandKind::TurnLeft : CommandKind::TurnRight;
            break;
    }
    return cmd;
}

}  // namespace flatswim::control
