#pragma once

// Planar rigid-body motion of the swimmer on the water surface.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "flatswim/geometry.hpp"
#include "flatswim/thrust.hpp"

namespace flatswim::dynamics {

/// Fin positions. A 2-actuator module has only the front pair, named L and R.
enum class FinId : std::uint8_t { FrontLeft = 0, FrontRight = 1, RearLeft = 2, RearRight = 3 };

class ActiveSet {
public:
    constexpr ActiveSet() = default;
    constexpr ActiveSet(std::initializer_list<FinId> fins) {
        for (FinId f : fins) bits_ |= bit(f);
    }
    static constexpr ActiveSet from_bits(std::uint8_t bits) {
        ActiveSet s;
        s.bits_ = bits & 0x0Fu;
        return s;
    }

    constexpr bool contains(FinId f) const { return (bits_ & bit(f)) != 0; }
    constexpr void insert(FinId f) { bits_ |= bit(f); }
    constexpr bool empty() const { return bits_ == 0; }
    constexpr int size() const {
        int n = 0;
        for (std::uint8_t b = bits_; b != 0; b &= static_cast<std::uint8_t>(b - 1)) ++n;
        return n;
    }
    constexpr std::uint8_t bits() const { return bits_; }
    /// Same set with left and right exchanged.
    constexpr ActiveSet mirrored() const {
        const auto lefts = static_cast<std::uint8_t>(bits_ & 0b0101u);
        const auto rights = static_cast<std::uint8_t>(bits_ & 0b1010u);
        return from_bits(static_cast<std::uint8_t>((lefts << 1) | (rights >> 1)));
    }

    friend constexpr bool operator==(ActiveSet, ActiveSet) = default;

private:
    static constexpr std::uint8_t bit(FinId f) { return static_cast<std::uint8_t>(1u << static_cast<unsigned>(f)); }
    std::uint8_t bits_ = 0;
};

std::string fin_name(FinId fin, int actuator_count);
/// Names joined by ';', e.g. "L;R". Empty set gives "".
std::string format_active_set(ActiveSet set, int actuator_count);
std::vector<std::string> active_set_names(ActiveSet set, int actuator_count);
/// Throws std::invalid_argument when the set addresses a missing fin.
void check_fins_exist(ActiveSet set, int actuator_count);

struct DynamicsParams {
    double effective_mass = 6.2e-3;       // kg, body plus added water mass
    double effective_inertia = 2.6e-6;    // kg·m²
    double drag_quadratic = 0.163;        // N·s²/m²
    double rotational_drag = 3.6e-6;      // N·m·s²
    double fin_moment_arm = 0.02;         // m
    double contact_stiffness = 50.0;      // N/m
    double contact_damping_ratio = 1.0;   // fraction of critical damping
    double sideways_factor = 0.5;         // lateral force per fin-force for same-side pairs
    double body_radius = 0.0275;          // m, contact and sensor footprint

    void validate() const;
};

/// Body-frame wrench: x forward, y to the left, torque counter-clockwise.
struct Wrench {
    Vec2 force;
    double torque = 0.0;
};

/// Fin activation to body wrench. Each front fin pushes forward and each
/// rear fin backward; a fin on the right turns the body counter-clockwise
/// when pushing forward. Same-side pairs give a lateral force away from
/// that side. Throws std::invalid_argument for combinations the design
/// cannot produce.
Wrench actuation_to_wrench(const thrust::ModuleDesign& design, ActiveSet active, double per_fin_force,
                           const DynamicsParams& params);

struct RobotState {
    Vec2 position;
    double heading = 0.0;  // rad, (-pi, pi]
    Vec2 velocity;         // m/s, world frame
    double angular_velocity = 0.0;
    ActiveSet active;
    double battery_J = 0.0;
    double cycles = 0.0;
    bool sunk = false;
};

struct Obstacle {
    Vec2 position;
    double radius = 0.02;
    double mass = 0.101;
    double drag_quadratic = 0.5;
    Vec2 velocity;

    void validate() const;
};

struct Arena {
    double width = 1.3;
    double height = 0.5;
};

struct World {
    double time = 0.0;
    RobotState robot;
    std::vector<Obstacle> obstacles;
    Arena arena;
};

struct ContactForces {
    Vec2 robot;
    std::vector<Vec2> obstacles;
};

/// Penalty contact between the robot disc, obstacles and arena walls:
/// stiffness times penetration plus a damper on the approaching normal
/// velocity, never pulling. Forces act equal and opposite.
ContactForces resolve_contacts(const RobotState& robot, std::span<const Obstacle> obstacles, const Arena& arena,
                               const DynamicsParams& params);

/// What the drive electronics deliver for one tick.
struct DriveInputs {
    double per_fin_force = 0.0;  // N, before degradation
    double f_act = 0.0;          // Hz
    double power = 0.0;          // W drawn over the tick
    bool battery_powered = false;
};

struct RobotModel {
    thrust::ModuleDesign design;
    DynamicsParams params;
    thrust::DegradationModel degradation = thrust::DegradationModel::defaults(thrust::Variant::PET);
};

inline constexpr double kMaxTimestep = 5e-3;

/// Advances the world by `dt` with semi-implicit Euler. The battery is
/// drained by `drive.power·dt` and the cycle counter advanced by f_act·dt
/// while any fin is active.
void step(World& world, const RobotModel& model, const DriveInputs& drive, double dt);

/// Per-fin force actually applied this tick, after degradation, sinking and
/// battery state.
double effective_fin_force(const RobotState& robot, const RobotModel& model, const DriveInputs& drive);

enum class Buoyancy { Floats, Sinks };

/// Added weight at which a bare module sinks.
inline constexpr double kPayloadLimit = 5.1e-3;  // kg

/// A bare module sinks above 5.1 g of payload; a build with foam flotation
/// always floats.
Buoyancy payload_check(double payload_kg, bool has_flotation = false);

}  // namespace flatswim::dynamics
