#include "flatswim/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "flatswim/calibrate.hpp"
#include "flatswim/drive.hpp"

namespace flatswim::sim {

using nlohmann::json;

json to_json(const Summary& s) {
    json j = {{"duration_s", s.duration},
              {"mean_speed_m_s", s.mean_speed},
              {"max_speed_m_s", s.max_speed},
              {"mean_abs_omega_rad_s", s.mean_abs_omega},
              {"max_abs_omega_rad_s", s.max_abs_omega},
              {"distance_m", s.distance},
              {"energy_J", s.energy_J},
              {"steady_speed_m_s", s.steady_speed},
              {"steady_abs_omega_rad_s", s.steady_abs_omega},
              {"steady_abs_omega_deg_s", rad_to_deg(s.steady_abs_omega)},
              {"body_lengths_per_s", s.body_lengths_per_s},
              {"sizes_per_s", s.sizes_per_s},
              {"final_battery_J", s.final_battery_J},
              {"battery_depleted", s.battery_depleted},
              {"sunk", s.sunk}};
    j["depleted_at_s"] = s.depleted_at ? json(*s.depleted_at) : json(nullptr);
    return j;
}

Summary summarize(const std::vector<TelemetryRow>& rows, double steady_window, double body_length,
                  double characteristic_size) {
    Summary s;
    if (rows.empty()) return s;
    const auto speed = [](const TelemetryRow& r) { return std::hypot(r.vx, r.vy); };
    double sum_v = 0.0;
    double sum_w = 0.0;
    for (std::size_t k = 0; k < rows.size(); ++k) {
        const auto& r = rows[k];
        const double v = speed(r);
        sum_v += v;
        sum_w += std::abs(r.omega);
        s.max_speed = std::max(s.max_speed, v);
        s.max_abs_omega = std::max(s.max_abs_omega, std::abs(r.omega));
        const double t_prev = k == 0 ? 0.0 : rows[k - 1].t;
        s.energy_J += r.power_W * (r.t - t_prev);
        if (k > 0) s.distance += std::hypot(r.x - rows[k - 1].x, r.y - rows[k - 1].y);
    }
    const auto n = static_cast<double>(rows.size());
    s.mean_speed = sum_v / n;
    s.mean_abs_omega = sum_w / n;
    s.duration = rows.back().t;

    const double t0 = rows.back().t - steady_window - 1e-9;
    double sv = 0.0;
    double sw = 0.0;
    int count = 0;
    for (const auto& r : rows)
        if (r.t >= t0) {
            sv += speed(r);
            sw += std::abs(r.omega);
            ++count;
        }
    s.steady_speed = sv / count;
    s.steady_abs_omega = sw / count;
    if (body_length > 0.0) s.body_lengths_per_s = s.steady_speed / body_length;
    if (characteristic_size > 0.0) s.sizes_per_s = s.steady_speed / characteristic_size;
    s.final_battery_J = rows.back().battery_J;
    return s;
}

std::string format_row(const TelemetryRow& r) {
    char buf[512];
    std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%s,%.12g,%.12g", r.t, r.x, r.y, r.theta,
                  r.vx, r.vy, r.omega, r.active_set.c_str(), r.battery_J, r.power_W);
    return buf;
}

void write_telemetry_csv(const std::filesystem::path& path, const std::vector<TelemetryRow>& rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "t,x,y,theta,vx,vy,omega,active_set,battery_J,power_W\n";
    for (const auto& r : rows) out << format_row(r) << '\n';
}

std::vector<TelemetryRow> read_telemetry_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line) || line.rfind("t,x,y,theta", 0) != 0)
        throw std::runtime_error(path.string() + ": not a telemetry file");
    std::vector<TelemetryRow> rows;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (cells.size() == 9 && line.back() == ',') cells.emplace_back();
        if (cells.size() != 10)
            throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": expected 10 columns");
        TelemetryRow r;
        try {
            r.t = std::stod(cells[0]);
            r.x = std::stod(cells[1]);
            r.y = std::stod(cells[2]);
            r.theta = std::stod(cells[3]);
            r.vx = std::stod(cells[4]);
            r.vy = std::stod(cells[5]);
            r.omega = std::stod(cells[6]);
            r.active_set = cells[7];
            r.battery_J = std::stod(cells[8]);
            r.power_W = std::stod(cells[9]);
        } catch (const std::logic_error&) {
            throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": malformed number");
        }
        rows.push_back(std::move(r));
    }
    return rows;
}

Simulation::Simulation(scenario::ScenarioConfig config) : config_(std::move(config)) {
    config_.validate();
    model_.design = config_.build.design;
    model_.params = config_.dynamics;
    model_.degradation = thrust::DegradationModel::defaults(config_.build.design.variant);

    world_.arena = config_.arena;
    world_.obstacles = config_.obstacles;
    auto& r = world_.robot;
    r.position = config_.position;
    r.heading = wrap_angle(config_.heading);
    r.battery_J = config_.build.battery_powered ? config_.battery.capacity_J() * config_.battery.initial_fraction : 0.0;
    r.sunk = dynamics::payload_check(config_.payload_kg, config_.build.flotation) == dynamics::Buoyancy::Sinks;

    for (const auto& l : config_.lights) lights_.push_back(l.source);
    light_event_index_.assign(lights_.size(), 0);
    total_ticks_ = std::llround(config_.duration / config_.dt);
    decimation_ticks_ = std::max<std::int64_t>(1, std::llround(config_.telemetry_decimation / config_.dt));
}

bool Simulation::finished() const {
    if (tick_ >= total_ticks_) return true;
    return depleted_at_.has_value() && config_.battery.stop_when_empty;
}

void Simulation::inject(const control::Command& cmd) {
    control::active_set_for(cmd.kind, config_.build.design.actuator_count);
    pending_commands_.push_back(cmd);
}

void Simulation::set_light(std::size_t id, bool on) {
    if (id >= lights_.size()) throw std::out_of_range("no light with id " + std::to_string(id));
    pending_lights_.emplace_back(id, on);
}

void Simulation::apply_pending() {
    const double now = time();
    const double eps = 0.5 * config_.dt;
    for (std::size_t i = 0; i < lights_.size(); ++i) {
        const auto& schedule = config_.lights[i].schedule;
        while (light_event_index_[i] < schedule.size() && schedule[light_event_index_[i]].t <= now + eps)
            lights_[i].on = schedule[light_event_index_[i]++].on;
    }
    for (const auto& [id, on] : pending_lights_) lights_[id].on = on;
    pending_lights_.clear();

    const auto& script = config_.controller.script;
    while (script_index_ < script.size() && script[script_index_].t <= now + eps) {
        const auto& e = script[script_index_++];
        auto plan = control::teleop_step({e.cmd, control::CommandSource::Script}, model_.design,
                                         config_.controller.teleop);
        if (e.duration && e.cmd != control::CommandKind::Stop) plan.duration = *e.duration;
        burst_.start(plan, tick_, config_.dt);
    }
    for (const auto& cmd : pending_commands_)
        burst_.start(control::teleop_step(cmd, model_.design, config_.controller.teleop), tick_, config_.dt);
    pending_commands_.clear();
}

void Simulation::run_controller() {
    if (config_.controller.mode != scenario::ControllerMode::Phototaxis || burst_.busy_at(tick_)) return;
    const auto& pc = config_.controller.phototaxis;
    const auto& r = world_.robot;
    const auto readings = control::read_sensors(r.position, r.heading, model_.params.body_radius, lights_, pc.min_distance);
    const control::Command cmd = control::phototaxis_policy(readings, pc);
    if (cmd.kind == control::CommandKind::Stop) return;
    control::ActivationPlan plan{control::active_set_for(cmd.kind, model_.design.actuator_count),
                                 cmd.kind == control::CommandKind::Forward ? pc.forward_burst_s : pc.turn_burst_s};
    burst_.start(plan, tick_, config_.dt);
}

std::optional<TelemetryRow> Simulation::tick() {
    if (finished()) return std::nullopt;
    apply_pending();
    run_controller();

    auto& r = world_.robot;
    r.active = burst_.active_at(tick_);
    const int n = r.active.size();
    const bool has_charge = !config_.build.battery_powered || r.battery_J > 0.0;

    dynamics::DriveInputs in;
    in.battery_powered = config_.build.battery_powered;
    in.f_act = config_.drive.f_act;
    in.per_fin_force = n > 0 ? per_fin_force(config_.thrust, model_.design, config_.drive, n) : 0.0;
    in.power = has_charge ? drive_power_W(config_.drive, model_.design, n) : 0.0;
    last_power_ = in.power;

    const Vec2 before = r.position;
    dynamics::step(world_, model_, in, config_.dt);
    distance_ += norm(r.position - before);
    energy_J_ += in.power * config_.dt;
    for (std::size_t i = 0; i < lights_.size(); ++i) lights_[i].position += config_.lights[i].velocity * config_.dt;

    ++tick_;
    // Re-derive time from the tick count so it never drifts.
    world_.time = time();
    if (config_.build.battery_powered && r.battery_J <= 0.0 && !depleted_at_) depleted_at_ = time();
    if (tick_ % decimation_ticks_ == 0) return snapshot();
    return std::nullopt;
}

TelemetryRow Simulation::snapshot() const {
    const auto& r = world_.robot;
    TelemetryRow row;
    row.t = time();
    row.x = r.position.x;
    row.y = r.position.y;
    row.theta = r.heading;
    row.vx = r.velocity.x;
    row.vy = r.velocity.y;
    row.omega = r.angular_velocity;
    row.active_set = dynamics::format_active_set(r.active, model_.design.actuator_count);
    row.battery_J = r.battery_J;
    row.power_W = last_power_;
    return row;
}

double Simulation::burst_remaining() const {
    return burst_.busy_at(tick_) ? static_cast<double>(burst_.end_tick() - tick_) * config_.dt : 0.0;
}

double Simulation::fin_phase() const {
    if (world_.robot.active.empty()) return 0.0;
    const double cycles = time() * config_.drive.f_act;
    return cycles - std::floor(cycles);
}

json Simulation::state_message() const {
    const auto& r = world_.robot;
    json j = {{"type", "state"},
              {"t", time()},
              {"x", r.position.x},
              {"y", r.position.y},
              {"theta", r.heading},
              {"v", json::array({r.velocity.x, r.velocity.y})},
              {"omega", r.angular_velocity},
              {"battery_J", r.battery_J},
              {"power_W", last_power_},
              {"active", dynamics::active_set_names(r.active, model_.design.actuator_count)},
              {"fins", {{"phase", fin_phase()}, {"f_act", config_.drive.f_act}}},
              {"sunk", r.sunk},
              {"burst", {{"remaining_s", burst_remaining()}, {"progress", burst_progress()}}}};
    j["obstacles"] = json::array();
    for (const auto& o : world_.obstacles)
        j["obstacles"].push_back({{"x", o.position.x}, {"y", o.position.y}, {"v", json::array({o.velocity.x, o.velocity.y})}});
    j["lights"] = json::array();
    for (std::size_t i = 0; i < lights_.size(); ++i)
        j["lights"].push_back({{"id", i}, {"on", lights_[i].on}, {"x", lights_[i].position.x}, {"y", lights_[i].position.y}});
    return j;
}

json Simulation::world_message() const {
    const int count = model_.design.actuator_count;
    json fins = json::array();
    for (auto f : {dynamics::FinId::FrontLeft, dynamics::FinId::FrontRight, dynamics::FinId::RearLeft,
                   dynamics::FinId::RearRight}) {
        if (count == 2 && (f == dynamics::FinId::RearLeft || f == dynamics::FinId::RearRight)) continue;
        fins.push_back(dynamics::fin_name(f, count));
    }
    json commands = json::array();
    for (auto k : {control::CommandKind::Forward, control::CommandKind::Backward, control::CommandKind::TurnLeft,
                   control::CommandKind::TurnRight, control::CommandKind::SideLeft, control::CommandKind::SideRight,
                   control::CommandKind::RotateCw, control::CommandKind::RotateCcw, control::CommandKind::Stop})
        if (count == 4 || !control::requires_four_actuators(k)) commands.push_back(control::to_string(k));

    json j = {{"type", "world"},
              {"protocol", 1},
              {"scenario", config_.name},
              {"dt", config_.dt},
              {"duration", config_.duration},
              {"arena", {{"width", config_.arena.width}, {"height", config_.arena.height}}},
              {"robot",
               {{"build", config_.build.name},
                {"design", config_.build.design},
                {"radius", model_.params.body_radius},
                {"body_length", config_.build.body_length},
                {"battery_powered", config_.build.battery_powered},
                {"fins", fins},
                {"commands", commands},
                {"burst_s", config_.controller.teleop.burst_s}}},
              {"controller", scenario::to_string(config_.controller.mode)}};
    j["obstacles"] = json::array();
    for (const auto& o : world_.obstacles)
        j["obstacles"].push_back({{"x", o.position.x}, {"y", o.position.y}, {"radius", o.radius}, {"mass_kg", o.mass}});
    j["lights"] = json::array();
    for (std::size_t i = 0; i < lights_.size(); ++i)
        j["lights"].push_back({{"id", i},
                               {"x", lights_[i].position.x},
                               {"y", lights_[i].position.y},
                               {"radiant_power", lights_[i].radiant_power},
                               {"on", lights_[i].on}});
    j["state"] = state_message();
    return j;
}

RunResult run(const scenario::ScenarioConfig& config) {
    Simulation sim(config);
    RunResult out;
    out.telemetry.reserve(static_cast<std::size_t>(sim.total_ticks() / std::max<std::int64_t>(1, std::llround(config.telemetry_decimation / config.dt))) + 1);
    while (!sim.finished())
        if (auto row = sim.tick()) out.telemetry.push_back(std::move(*row));
    out.summary = summarize(out.telemetry, config.steady_window, config.build.body_length, config.build.characteristic_size);
    if (!out.telemetry.empty()) {
        out.summary.distance = sim.distance();
        out.summary.energy_J = sim.energy_J();
    }
    out.summary.duration = sim.time();
    out.summary.final_battery_J = sim.world().robot.battery_J;
    out.summary.depleted_at = sim.depleted_at();
    out.summary.battery_depleted = sim.depleted_at().has_value();
    out.summary.sunk = sim.world().robot.sunk;
    return out;
}

}  // namespace flatswim::sim
