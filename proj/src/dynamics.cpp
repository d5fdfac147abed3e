#include "flatswim/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace flatswim::dynamics {

using thrust::ModuleDesign;

std::string fin_name(FinId fin, int actuator_count) {
    if (actuator_count == 2) {
        switch (fin) {
            case FinId::FrontLeft: return "L";
            case FinId::FrontRight: return "R";
            default: throw std::invalid_argument("2-actuator module has no rear fins");
        }
    }
    switch (fin) {
        case FinId::FrontLeft: return "FL";
        case FinId::FrontRight: return "FR";
        case FinId::RearLeft: return "RL";
        case FinId::RearRight: return "RR";
    }
    return "?";
}

std::vector<std::string> active_set_names(ActiveSet set, int actuator_count) {
    std::vector<std::string> out;
    for (auto f : {FinId::FrontLeft, FinId::FrontRight, FinId::RearLeft, FinId::RearRight})
        if (set.contains(f)) out.push_back(fin_name(f, actuator_count));
    return out;
}

std::string format_active_set(ActiveSet set, int actuator_count) {
    std::string out;
    for (const auto& n : active_set_names(set, actuator_count)) {
        if (!out.empty()) out += ';';
        out += n;
    }
    return out;
}

void check_fins_exist(ActiveSet set, int actuator_count) {
    if (actuator_count == 2 && (set.contains(FinId::RearLeft) || set.contains(FinId::RearRight)))
        throw std::invalid_argument("active set addresses rear fins on a 2-actuator module");
}

void DynamicsParams::validate() const {
    if (!(effective_mass > 0.0) || !(effective_inertia > 0.0) || !(drag_quadratic > 0.0) ||
        !(rotational_drag > 0.0) || !(fin_moment_arm > 0.0) || !(contact_stiffness > 0.0) ||
        !(body_radius > 0.0))
        throw std::invalid_argument("dynamics params: all coefficients must be > 0");
    if (contact_damping_ratio < 0.0 || sideways_factor < 0.0)
        throw std::invalid_argument("dynamics params: damping ratio and sideways factor must be >= 0");
}

void Obstacle::validate() const {
    if (!(radius > 0.0) || !(mass > 0.0)) throw std::invalid_argument("obstacle: radius and mass must be > 0");
    if (drag_quadratic < 0.0) throw std::invalid_argument("obstacle: drag must be >= 0");
}

Wrench actuation_to_wrench(const ModuleDesign& design, ActiveSet active, double per_fin_force,
                           const DynamicsParams& params) {
    check_fins_exist(active, design.actuator_count);
    if (active.size() > 2) throw std::invalid_argument("actuation_to_wrench: at most two fins may be active");

    const ActiveSet left_pair{FinId::FrontLeft, FinId::RearLeft};
    const ActiveSet right_pair{FinId::FrontRight, FinId::RearRight};
    if (active == left_pair || active == right_pair) {
        const double side = active == left_pair ? -1.0 : 1.0;  // pushed away from the active side
        return {{0.0, side * params.sideways_factor * per_fin_force}, 0.0};
    }

    // Superposition of single-fin contributions.
    Wrench w;
    const double arm_torque = per_fin_force * params.fin_moment_arm;
    if (active.contains(FinId::FrontLeft)) { w.force.x += per_fin_force; w.torque -= arm_torque; }
    if (active.contains(FinId::FrontRight)) { w.force.x += per_fin_force; w.torque += arm_torque; }
    if (active.contains(FinId::RearLeft)) { w.force.x -= per_fin_force; w.torque += arm_torque; }
    if (active.contains(FinId::RearRight)) { w.force.x -= per_fin_force; w.torque -= arm_torque; }
    return w;
}

namespace {

// Normal force magnitude for penetration `pen` and separation speed `v_sep`
// (negative when approaching).
double normal_force(double pen, double v_sep, double stiffness, double damping) {
    return std::max(0.0, stiffness * pen - damping * v_sep);
}

double damping_coefficient(const DynamicsParams& p, double reduced_mass) {
    return 2.0 * p.contact_damping_ratio * std::sqrt(p.contact_stiffness * reduced_mass);
}

// Wall force on a disc of radius r at `pos` moving with `vel`.
Vec2 wall_force(Vec2 pos, Vec2 vel, double r, double mass, const Arena& arena, const DynamicsParams& p) {
    const double c = damping_coefficient(p, mass);
    Vec2 f;
    if (double pen = r - pos.x; pen > 0.0) f.x += normal_force(pen, vel.x, p.contact_stiffness, c);
    if (double pen = pos.x + r - arena.width; pen > 0.0) f.x -= normal_force(pen, -vel.x, p.contact_stiffness, c);
    if (double pen = r - pos.y; pen > 0.0) f.y += normal_force(pen, vel.y, p.contact_stiffness, c);
    if (double pen = pos.y + r - arena.height; pen > 0.0) f.y -= normal_force(pen, -vel.y, p.contact_stiffness, c);
    return f;
}

// Force on body b from body a.
Vec2 pair_force(Vec2 pa, Vec2 va, double ra, double ma, Vec2 pb, Vec2 vb, double rb, double mb,
                const DynamicsParams& p) {
    const Vec2 d = pb - pa;
    const double dist = norm(d);
    const double pen = ra + rb - dist;
    if (pen <= 0.0 || dist == 0.0) return {};
    const Vec2 n = d / dist;
    const double v_sep = dot(vb - va, n);
    const double c = damping_coefficient(p, ma * mb / (ma + mb));
    return n * normal_force(pen, v_sep, p.contact_stiffness, c);
}

}  // namespace

ContactForces resolve_contacts(const RobotState& robot, std::span<const Obstacle> obstacles, const Arena& arena,
                               const DynamicsParams& params) {
    ContactForces out;
    out.obstacles.assign(obstacles.size(), Vec2{});
    const double rm = params.effective_mass;
    const double rr = params.body_radius;

    out.robot += wall_force(robot.position, robot.velocity, rr, rm, arena, params);
    for (std::size_t i = 0; i < obstacles.size(); ++i) {
        const auto& o = obstacles[i];
        const Vec2 f = pair_force(robot.position, robot.velocity, rr, rm, o.position, o.velocity, o.radius, o.mass,
                                  params);
        out.obstacles[i] += f;
        out.robot -= f;
        out.obstacles[i] += wall_force(o.position, o.velocity, o.radius, o.mass, arena, params);
        for (std::size_t k = i + 1; k < obstacles.size(); ++k) {
            const auto& q = obstacles[k];
            const Vec2 g = pair_force(o.position, o.velocity, o.radius, o.mass, q.position, q.velocity, q.radius,
                                      q.mass, params);
            out.obstacles[k] += g;
            out.obstacles[i] -= g;
        }
    }
    return out;
}

double effective_fin_force(const RobotState& robot, const RobotModel& model, const DriveInputs& drive) {
    if (robot.sunk) return 0.0;
    if (drive.battery_powered && robot.battery_J <= 0.0) return 0.0;
    const auto d = thrust::degradation_factor(robot.cycles, model.degradation);
    if (d.failed) return 0.0;
    return drive.per_fin_force * d.multiplier;
}

void step(World& world, const RobotModel& model, const DriveInputs& drive, double dt) {
    if (!(dt > 0.0) || dt > kMaxTimestep) throw std::invalid_argument("step: dt must be in (0, 5 ms]");
    const DynamicsParams& p = model.params;
    RobotState& r = world.robot;

    const Wrench w = actuation_to_wrench(model.design, r.active, effective_fin_force(r, model, drive), p);
    const ContactForces contacts = resolve_contacts(r, world.obstacles, world.arena, p);

    const Vec2 thrust_world = rotate(w.force, r.heading);
    const Vec2 drag = r.velocity * (-p.drag_quadratic * norm(r.velocity));
    r.velocity += (thrust_world + drag + contacts.robot) * (dt / p.effective_mass);
    r.position += r.velocity * dt;

    const double rot_drag = -p.rotational_drag * std::abs(r.angular_velocity) * r.angular_velocity;
    r.angular_velocity += (w.torque + rot_drag) * (dt / p.effective_inertia);
    r.heading = wrap_angle(r.heading + r.angular_velocity * dt);

    for (std::size_t i = 0; i < world.obstacles.size(); ++i) {
        Obstacle& o = world.obstacles[i];
        const Vec2 odrag = o.velocity * (-o.drag_quadratic * norm(o.velocity));
        o.velocity += (contacts.obstacles[i] + odrag) * (dt / o.mass);
        o.position += o.velocity * dt;
    }

    if (drive.battery_powered) r.battery_J = std::max(0.0, r.battery_J - drive.power * dt);
    if (!r.active.empty() && !r.sunk) r.cycles += drive.f_act * dt;
    world.time += dt;
}

Buoyancy payload_check(double payload_kg, bool has_flotation) {
    if (payload_kg < 0.0) throw std::invalid_argument("payload_check: payload must be >= 0");
    if (has_flotation) return Buoyancy::Floats;
    return payload_kg > kPayloadLimit ? Buoyancy::Sinks : Buoyancy::Floats;
}

}  // namespace flatswim::dynamics
