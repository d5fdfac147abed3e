#include "flatswim/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "flatswim/calibrate.hpp"
#include "flatswim/data.hpp"

namespace flatswim::scenario {

using nlohmann::json;

const Build& BuildCatalog::at(const std::string& name) const {
    const auto it = builds.find(name);
    if (it == builds.end()) throw std::invalid_argument("unknown build '" + name + "'");
    return it->second;
}

const Build* BuildCatalog::find(const thrust::ModuleDesign& design) const {
    for (const auto& [name, b] : builds)
        if (b.design == design) return &b;
    return nullptr;
}

BuildCatalog BuildCatalog::from_json(const json& j) {
    BuildCatalog cat;
    for (const auto& [name, v] : j.items()) {
        if (!name.empty() && name[0] == '_') continue;
        Build b;
        b.name = name;
        b.design = v.at("design").get<thrust::ModuleDesign>();
        b.design.validate();
        b.calibration = v.at("calibration").get<std::string>();
        b.battery_powered = v.value("battery_powered", false);
        b.flotation = v.value("flotation", false);
        b.body_length = v.value("body_length_mm", 45.0) * 1e-3;
        b.characteristic_size = v.value("characteristic_size_mm", 55.0) * 1e-3;
        b.drive = v.at("drive").get<DriveSpec>();
        if (v.contains("battery")) {
            b.battery_capacity_mAh = v["battery"].value("capacity_mAh", 30.0);
            b.battery_voltage = v["battery"].value("voltage", 3.7);
        }
        cat.builds.emplace(name, std::move(b));
    }
    return cat;
}

BuildCatalog BuildCatalog::load(const std::filesystem::path& path) { return from_json(read_json(path)); }

const BuildCatalog& BuildCatalog::bundled() {
    static const BuildCatalog cat = load(data_dir() / "builds.json");
    return cat;
}

std::string_view to_string(ControllerMode mode) {
    switch (mode) {
        case ControllerMode::Script: return "script";
        case ControllerMode::Teleop: return "teleop";
        case ControllerMode::Phototaxis: return "phototaxis";
    }
    return "?";
}

namespace {

// Object reader that tracks consumed keys and reports errors by path.
class Reader {
public:
    Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw ConfigError(path_.empty() ? "<root>" : path_, "expected an object");
    }

    std::string at(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
    bool has(const std::string& key) const { return j_.contains(key); }

    const json& raw(const std::string& key) {
        used_.insert(key);
        if (!j_.contains(key)) throw ConfigError(at(key), "missing required field");
        return j_.at(key);
    }

    double number(const std::string& key) {
        const json& v = raw(key);
        if (!v.is_number()) throw ConfigError(at(key), "expected a number");
        const double d = v.get<double>();
        if (!std::isfinite(d)) throw ConfigError(at(key), "must be finite");
        return d;
    }
    double number(const std::string& key, double def) { return has(key) ? number(key) : def; }

    bool boolean(const std::string& key, bool def) {
        if (!has(key)) return def;
        const json& v = raw(key);
        if (!v.is_boolean()) throw ConfigError(at(key), "expected true or false");
        return v.get<bool>();
    }

    std::string string(const std::string& key) {
        const json& v = raw(key);
        if (!v.is_string()) throw ConfigError(at(key), "expected a string");
        return v.get<std::string>();
    }
    std::string string(const std::string& key, const std::string& def) { return has(key) ? string(key) : def; }

    Vec2 vec2(const std::string& key) {
        const json& v = raw(key);
        if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
            throw ConfigError(at(key), "expected [x, y]");
        return {v[0].get<double>(), v[1].get<double>()};
    }
    Vec2 vec2(const std::string& key, Vec2 def) { return has(key) ? vec2(key) : def; }

    const json& array(const std::string& key) {
        const json& v = raw(key);
        if (!v.is_array()) throw ConfigError(at(key), "expected an array");
        return v;
    }

    void finish() const {
        for (const auto& [key, v] : j_.items()) {
            if (!key.empty() && key[0] == '_') continue;
            if (!used_.count(key)) throw ConfigError(at(key), "unknown field");
        }
    }

private:
    const json& j_;
    std::string path_;
    std::set<std::string> used_;
};

std::string index_path(const std::string& base, std::size_t i) { return base + "[" + std::to_string(i) + "]"; }

template <class F>
auto wrap(const std::string& path, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(path, e.what());
    }
}

void parse_dynamics_overrides(Reader r, dynamics::DynamicsParams& p) {
    p.effective_mass = r.number("effective_mass", p.effective_mass);
    p.effective_inertia = r.number("effective_inertia", p.effective_inertia);
    p.drag_quadratic = r.number("drag_quadratic", p.drag_quadratic);
    p.rotational_drag = r.number("rotational_drag", p.rotational_drag);
    p.fin_moment_arm = r.number("fin_moment_arm", p.fin_moment_arm);
    p.contact_stiffness = r.number("contact_stiffness", p.contact_stiffness);
    p.contact_damping_ratio = r.number("contact_damping_ratio", p.contact_damping_ratio);
    p.sideways_factor = r.number("sideways_factor", p.sideways_factor);
    p.body_radius = r.number("body_radius", p.body_radius);
    r.finish();
}

void parse_robot(Reader r, const BuildCatalog& builds, ScenarioConfig& c) {
    if (r.has("build")) {
        const std::string name = r.string("build");
        wrap(r.at("build"), [&] { c.build = builds.at(name); });
        if (r.has("design")) {
            const auto d = wrap(r.at("design"), [&] { return r.raw("design").get<thrust::ModuleDesign>(); });
            if (!(d == c.build.design)) throw ConfigError(r.at("design"), "does not match build '" + name + "'");
        }
    } else if (r.has("design")) {
        const auto d = wrap(r.at("design"), [&] {
            auto design = r.raw("design").get<thrust::ModuleDesign>();
            design.validate();
            return design;
        });
        const Build* b = builds.find(d);
        if (b == nullptr) throw ConfigError(r.at("design"), "unknown design " + d.key());
        c.build = *b;
    } else {
        c.build = builds.at("tethered-2act");
    }
    c.dynamics = wrap(r.at("build"), [&] { return calibration::calibrate(c.build.calibration).params; });
    c.position = r.vec2("position", {c.arena.width / 2, c.arena.height / 2});
    c.heading = deg_to_rad(r.number("heading_deg", 0.0));
    c.payload_kg = r.number("payload_kg", 0.0);
    if (r.has("dynamics")) parse_dynamics_overrides(Reader(r.raw("dynamics"), r.at("dynamics")), c.dynamics);
    r.finish();
}

dynamics::Obstacle parse_obstacle(Reader r) {
    dynamics::Obstacle o;
    o.position = r.vec2("position");
    o.radius = r.number("radius", o.radius);
    o.mass = r.number("mass_kg", o.mass);
    o.drag_quadratic = r.number("drag_quadratic", o.drag_quadratic);
    o.velocity = r.vec2("velocity", {});
    r.finish();
    return o;
}

LightConfig parse_light(Reader r) {
    LightConfig l;
    l.source.position = r.vec2("position");
    l.source.radiant_power = r.number("radiant_power", 1.0);
    l.source.on = r.boolean("on", true);
    l.velocity = r.vec2("velocity", {});
    if (r.has("schedule")) {
        const json& arr = r.array("schedule");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            Reader e(arr[i], index_path(r.at("schedule"), i));
            LightEvent ev;
            ev.t = e.number("t");
            ev.on = e.boolean("on", true);
            e.finish();
            l.schedule.push_back(ev);
        }
        std::stable_sort(l.schedule.begin(), l.schedule.end(),
                         [](const LightEvent& a, const LightEvent& b) { return a.t < b.t; });
    }
    r.finish();
    return l;
}

void parse_controller(Reader r, ScenarioConfig& c) {
    const std::string mode = r.string("mode", "script");
    if (mode == "script") c.controller.mode = ControllerMode::Script;
    else if (mode == "teleop") c.controller.mode = ControllerMode::Teleop;
    else if (mode == "phototaxis") c.controller.mode = ControllerMode::Phototaxis;
    else throw ConfigError(r.at("mode"), "must be script, teleop or phototaxis");
    c.controller.teleop.burst_s = r.number("burst_s", c.controller.teleop.burst_s);
    if (r.has("script")) {
        const json& arr = r.array("script");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const std::string path = index_path(r.at("script"), i);
            Reader e(arr[i], path);
            ScriptEntry s;
            s.t = e.number("t");
            const std::string cmd = e.string("cmd");
            s.cmd = wrap(path + ".cmd", [&] { return control::parse_command(cmd); });
            if (e.has("duration")) s.duration = e.number("duration");
            e.finish();
            c.controller.script.push_back(s);
        }
        std::stable_sort(c.controller.script.begin(), c.controller.script.end(),
                         [](const ScriptEntry& a, const ScriptEntry& b) { return a.t < b.t; });
    }
    if (r.has("phototaxis")) {
        Reader p(r.raw("phototaxis"), r.at("phototaxis"));
        auto& pc = c.controller.phototaxis;
        pc.deadband = p.number("deadband", pc.deadband);
        pc.forward_burst_s = p.number("forward_burst_s", pc.forward_burst_s);
        pc.turn_burst_s = p.number("turn_burst_s", pc.turn_burst_s);
        pc.min_distance = p.number("min_distance", pc.min_distance);
        p.finish();
    }
    r.finish();
}
void parse_thrust_anchors(Reader r, ScenarioConfig& c) {
    const auto& design = c.build.design;
    auto& e = wrap("thrust_anchors", [&]() -> thrust::DesignEntry& {
        for (auto& d : c.thrust.designs)
            if (d.design == design) return d;
        throw std::invalid_argument("no thrust calibration for design " + design.key());
    });
    auto& threshold = c.thrust.threshold_voltage[design.variant];
    threshold = r.number("threshold_voltage", threshold);
    if (r.has("voltage_anchors")) {
        const json& arr = r.array("voltage_anchors");
        e.voltage_anchors.clear();
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const json& a = arr[i];
            if (!a.is_array() || a.size() != 2 || !a[0].is_number() || !a[1].is_number())
                throw ConfigError(index_path(r.at("voltage_anchors"), i), "expected [voltage, force_mN]");
            e.voltage_anchors.push_back({a[0].get<double>(), a[1].get<double>()});
        }
        e.peak_force_mN = e.voltage_anchors.empty() ? 0.0 : e.voltage_anchors.back().force_mN;
    }
    e.f_opt = r.number("f_opt", e.f_opt);
    e.half_width_low = r.number("half_width_low", e.half_width_low);
    e.half_width_high = r.number("half_width_high", e.half_width_high);
    e.clamp_voltage = r.number("clamp_voltage", e.clamp_voltage);
    r.finish();
    wrap("thrust_anchors", [&] { c.thrust.validate(); });
}

bool disc_inside(Vec2 p, double r, const dynamics::Arena& a) {
    return p.x - r >= 0.0 && p.y - r >= 0.0 && p.x + r <= a.width && p.y + r <= a.height;
}

}  // namespace

void ScenarioConfig::validate() const {
    if (!(dt > 0.0) || dt > dynamics::kMaxTimestep) throw ConfigError("dt", "must be in (0, 0.005] s");
    if (!(duration >= 0.0)) throw ConfigError("duration", "must be >= 0");
    if (!(arena.width > 0.0) || !(arena.height > 0.0)) throw ConfigError("arena", "width and height must be > 0");
    wrap("robot.dynamics", [&] { dynamics.validate(); });
    wrap("robot.build", [&] { build.design.validate(); });
    if (!disc_inside(position, dynamics.body_radius, arena)) throw ConfigError("robot.position", "outside arena");
    if (payload_kg < 0.0) throw ConfigError("robot.payload_kg", "must be >= 0");
    wrap("drive", [&] { drive.validate(); });
    if (drive.mode == DriveMode::Hvps && build.design.actuator_count != 2)
        throw ConfigError("drive.mode", "the HVPS drives 2-actuator designs only");
    if (!(battery.capacity_mAh > 0.0) || !(battery.voltage > 0.0))
        throw ConfigError("battery", "capacity and voltage must be > 0");
    if (battery.initial_fraction < 0.0 || battery.initial_fraction > 1.0)
        throw ConfigError("battery.initial_fraction", "must be within [0, 1]");
    for (std::size_t i = 0; i < obstacles.size(); ++i) {
        const std::string path = index_path("obstacles", i);
        wrap(path, [&] { obstacles[i].validate(); });
        if (!disc_inside(obstacles[i].position, obstacles[i].radius, arena)) throw ConfigError(path, "outside arena");
    }
    for (std::size_t i = 0; i < lights.size(); ++i) {
        const std::string path = index_path("lights", i);
        wrap(path, [&] { lights[i].source.validate(); });
        const Vec2 p = lights[i].source.position;
        if (p.x < 0.0 || p.y < 0.0 || p.x > arena.width || p.y > arena.height)
            throw ConfigError(path, "outside arena");
    }
    wrap("controller", [&] {
        controller.teleop.validate();
        controller.phototaxis.validate();
    });
    for (std::size_t i = 0; i < controller.script.size(); ++i) {
        const std::string path = index_path("controller.script", i);
        const auto& s = controller.script[i];
        if (s.t < 0.0) throw ConfigError(path + ".t", "must be >= 0");
        if (s.duration && *s.duration < 0.0) throw ConfigError(path + ".duration", "must be >= 0");
        wrap(path + ".cmd", [&] { control::active_set_for(s.cmd, build.design.actuator_count); });
    }
    if (!(telemetry_decimation >= dt)) throw ConfigError("telemetry.decimation_s", "must be >= dt");
    if (!(steady_window >= 0.0)) throw ConfigError("steady_window_s", "must be >= 0");
}

ScenarioConfig parse_scenario(const json& j, const BuildCatalog& builds) {
    Reader r(j, "");
    ScenarioConfig c;
    c.name = r.string("name", "scenario");
    c.description = r.string("description", "");
    if (r.has("seed")) {
        const json& s = r.raw("seed");
        if (!s.is_number_integer() || s.get<long long>() < 0) throw ConfigError("seed", "expected a non-negative integer");
        c.seed = s.get<std::uint64_t>();
    }
    c.dt = r.number("dt", c.dt);
    c.duration = r.number("duration", c.duration);
    {
        Reader a(r.raw("arena"), "arena");
        c.arena.width = a.number("width");
        c.arena.height = a.number("height");
        a.finish();
    }
    if (!(c.arena.width > 0.0) || !(c.arena.height > 0.0)) throw ConfigError("arena", "width and height must be > 0");
    parse_robot(Reader(r.raw("robot"), "robot"), builds, c);

    c.drive = c.build.drive;
    if (r.has("drive")) c.drive = wrap("drive", [&] { return r.raw("drive").get<DriveSpec>(); });
    if (r.has("thrust_anchors")) parse_thrust_anchors(Reader(r.raw("thrust_anchors"), "thrust_anchors"), c);
    c.battery.capacity_mAh = c.build.battery_capacity_mAh;
    c.battery.voltage = c.build.battery_voltage;
    if (r.has("battery")) {
        Reader b(r.raw("battery"), "battery");
        c.battery.capacity_mAh = b.number("capacity_mAh", c.battery.capacity_mAh);
        c.battery.voltage = b.number("voltage", c.battery.voltage);
        c.battery.initial_fraction = b.number("initial_fraction", c.battery.initial_fraction);
        c.battery.stop_when_empty = b.boolean("stop_when_empty", c.battery.stop_when_empty);
        b.finish();
    }
    if (r.has("obstacles")) {
        const json& arr = r.array("obstacles");
        for (std::size_t i = 0; i < arr.size(); ++i)
            c.obstacles.push_back(parse_obstacle(Reader(arr[i], index_path("obstacles", i))));
    }
    if (r.has("lights")) {
        const json& arr = r.array("lights");
        for (std::size_t i = 0; i < arr.size(); ++i)
            c.lights.push_back(parse_light(Reader(arr[i], index_path("lights", i))));
    }
    if (r.has("controller")) parse_controller(Reader(r.raw("controller"), "controller"), c);
    if (r.has("telemetry")) {
        Reader t(r.raw("telemetry"), "telemetry");
        c.telemetry_decimation = t.number("decimation_s", c.telemetry_decimation);
        t.finish();
    }
    c.steady_window = r.number("steady_window_s", c.steady_window);
    if (r.has("workers")) {
        const json& w = r.raw("workers");
        if (!w.is_number_integer() || w.get<long long>() < 0) throw ConfigError("workers", "expected an integer >= 0");
        c.workers = w.get<unsigned>();
    }
    r.finish();
    c.validate();
    return c;
}

ScenarioConfig load_scenario(const std::filesystem::path& path, const BuildCatalog& builds) {
    json j;
    try {
        j = read_json(path);
    } catch (const std::runtime_error& e) {
        throw ConfigError(path.string(), e.what());
    }
    return parse_scenario(j, builds);
}

std::filesystem::path resolve_scenario(const std::string& name_or_path) {
    const std::filesystem::path p(name_or_path);
    if (std::filesystem::exists(p)) return p;
    const auto bundled = data_dir() / "scenarios" / (name_or_path + ".json");
    if (std::filesystem::exists(bundled)) return bundled;
    throw std::invalid_argument("no scenario file or bundled scenario named '" + name_or_path + "'");
}

std::vector<std::string> bundled_scenarios() {
    std::vector<std::string> out;
    const auto dir = data_dir() / "scenarios";
    if (!std::filesystem::exists(dir)) return out;
    for (const auto& e : std::filesystem::directory_iterator(dir))
        if (e.path().extension() == ".json") out.push_back(e.path().stem().string());
    std::sort(out.begin(), out.end());
    return out;
}

json to_json(const ScenarioConfig& c) {
    const auto v2 = [](Vec2 v) { return json::array({v.x, v.y}); };
    json j;
    j["name"] = c.name;
    j["description"] = c.description;
    j["seed"] = c.seed;
    j["dt"] = c.dt;
    j["duration"] = c.duration;
    j["arena"] = {{"width", c.arena.width}, {"height", c.arena.height}};
    const auto& p = c.dynamics;
    j["robot"] = {{"build", c.build.name},
                  {"design", c.build.design},
                  {"position", v2(c.position)},
                  {"heading_deg", rad_to_deg(c.heading)},
                  {"payload_kg", c.payload_kg},
                  {"dynamics",
                   {{"effective_mass", p.effective_mass},
                    {"effective_inertia", p.effective_inertia},
                    {"drag_quadratic", p.drag_quadratic},
                    {"rotational_drag", p.rotational_drag},
                    {"fin_moment_arm", p.fin_moment_arm},
                    {"contact_stiffness", p.contact_stiffness},
                    {"contact_damping_ratio", p.contact_damping_ratio},
                    {"sideways_factor", p.sideways_factor},
                    {"body_radius", p.body_radius}}}};
    j["drive"] = c.drive;
    if (c.thrust.contains(c.build.design)) {
        const auto& e = c.thrust.entry(c.build.design);
        json anchors = json::array();
        for (const auto& a : e.voltage_anchors) anchors.push_back({a.voltage, a.force_mN});
        j["thrust_anchors"] = {{"threshold_voltage", c.thrust.threshold_voltage.at(c.build.design.variant)},
                               {"voltage_anchors", anchors},
                               {"f_opt", e.f_opt},
                               {"half_width_low", e.half_width_low},
                               {"half_width_high", e.half_width_high},
                               {"clamp_voltage", e.clamp_voltage}};
    }
    j["battery"] = {{"capacity_mAh", c.battery.capacity_mAh},
                    {"voltage", c.battery.voltage},
                    {"initial_fraction", c.battery.initial_fraction},
                    {"stop_when_empty", c.battery.stop_when_empty}};
    j["obstacles"] = json::array();
    for (const auto& o : c.obstacles)
        j["obstacles"].push_back({{"position", v2(o.position)},
                                  {"radius", o.radius},
                                  {"mass_kg", o.mass},
                                  {"drag_quadratic", o.drag_quadratic},
                                  {"velocity", v2(o.velocity)}});
    j["lights"] = json::array();
    for (const auto& l : c.lights) {
        json lj = {{"position", v2(l.source.position)},
                   {"radiant_power", l.source.radiant_power},
                   {"on", l.source.on},
                   {"velocity", v2(l.velocity)},
                   {"schedule", json::array()}};
        for (const auto& e : l.schedule) lj["schedule"].push_back({{"t", e.t}, {"on", e.on}});
        j["lights"].push_back(lj);
    }
    json ctl = {{"mode", to_string(c.controller.mode)},
                {"burst_s", c.controller.teleop.burst_s},
                {"phototaxis",
                 {{"deadband", c.controller.phototaxis.deadband},
                  {"forward_burst_s", c.controller.phototaxis.forward_burst_s},
                  {"turn_burst_s", c.controller.phototaxis.turn_burst_s},
                  {"min_distance", c.controller.phototaxis.min_distance}}},
                {"script", json::array()}};
    for (const auto& s : c.controller.script) {
        json sj = {{"t", s.t}, {"cmd", control::to_string(s.cmd)}};
        if (s.duration) sj["duration"] = *s.duration;
        ctl["script"].push_back(sj);
    }
    j["controller"] = ctl;
    j["telemetry"] = {{"decimation_s", c.telemetry_decimation}};
    j["steady_window_s"] = c.steady_window;
    j["workers"] = c.workers;
    return j;
}

}  // namespace flatswim::scenario
