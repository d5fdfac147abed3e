#include "flatswim/calibrate.hpp"

#include <algorithm>
#include <stdexcept>

#include "flatswim/data.hpp"
#include "flatswim/geometry.hpp"

namespace flatswim::calibration {

void AnchorSet::validate() const {
    design.validate();
    translation_drive.validate();
    rotation_drive.validate();
    if (!(body_length > 0.0) || !(body_width > 0.0) || !(fin_moment_arm > 0.0))
        throw std::invalid_argument("anchor set '" + name + "': body size and moment arm must be > 0");
    if (!(translation_speed > 0.0) || !(rotation_rate > 0.0))
        throw std::invalid_argument("anchor set '" + name + "': target speeds must be > 0");
    if (peak_acceleration && !(*peak_acceleration > 0.0))
        throw std::invalid_argument("anchor set '" + name + "': peak acceleration must be > 0");
    if (!peak_acceleration && !mass_reference)
        throw std::invalid_argument("anchor set '" + name + "': needs peak_accel_cm_s2 or mass_from");
    if (!(mass_ratio > 0.0)) throw std::invalid_argument("anchor set '" + name + "': mass ratio must be > 0");
    if (rotation_fins == RotationFins::Diagonal && design.actuator_count != 4)
        throw std::invalid_argument("anchor set '" + name + "': diagonal rotation needs 4 actuators");
}

AnchorSet anchor_set_from_json(const std::string& name, const nlohmann::json& j) {
    AnchorSet s;
    s.name = name;
    s.design = j.at("design").get<thrust::ModuleDesign>();
    const auto& size = j.at("body_size_mm");
    s.body_length = size.at(0).get<double>() * 1e-3;
    s.body_width = size.at(1).get<double>() * 1e-3;
    s.fin_moment_arm = j.value("fin_moment_arm_m", 0.02);

    const auto& tr = j.at("translation");
    s.translation_drive = tr.at("drive").get<DriveSpec>();
    s.translation_speed = tr.at("speed_cm_s").get<double>() * 1e-2;
    if (tr.contains("peak_accel_cm_s2")) s.peak_acceleration = tr["peak_accel_cm_s2"].get<double>() * 1e-2;

    const auto& rot = j.at("rotation");
    s.rotation_drive = rot.at("drive").get<DriveSpec>();
    const std::string fins = rot.value("fins", "single");
    if (fins == "single") s.rotation_fins = RotationFins::Single;
    else if (fins == "diagonal") s.rotation_fins = RotationFins::Diagonal;
    else throw std::invalid_argument("anchor set '" + name + "': rotation.fins must be single or diagonal");
    s.rotation_rate = deg_to_rad(rot.at("omega_deg_s").get<double>());

    if (j.contains("mass_from")) {
        const auto& mf = j["mass_from"];
        s.mass_reference = mf.at("set").get<std::string>();
        if (mf.contains("mass_g")) s.mass_ratio = mf["mass_g"].get<double>() / mf.at("reference_mass_g").get<double>();
    }
    s.validate();
    return s;
}

const AnchorSet& AnchorSets::at(const std::string& name) const {
    const auto it = sets.find(name);
    if (it == sets.end()) throw std::invalid_argument("unknown calibration target '" + name + "'");
    return it->second;
}

AnchorSets AnchorSets::from_json(const nlohmann::json& j) {
    AnchorSets out;
    for (const auto& [name, value] : j.items()) {
        if (!name.empty() && name[0] == '_') continue;
        out.sets.emplace(name, anchor_set_from_json(name, value));
    }
    return out;
}

AnchorSets AnchorSets::load(const std::filesystem::path& path) { return from_json(read_json(path)); }

const AnchorSets& AnchorSets::bundled() {
    static const AnchorSets sets = load(data_dir() / "calibration_targets.json");
    return sets;
}

namespace {

Fit calibrate_impl(const AnchorSet& s, const AnchorSets& all, const thrust::ThrustCalibration& cal, int depth) {
    if (depth > 4) throw std::invalid_argument("calibration: mass_from references form a cycle");
    s.validate();
    Fit fit;
    fit.name = s.name;
    fit.translation_speed = s.translation_speed;
    fit.rotation_rate = s.rotation_rate;

    const double t = 2.0 * per_fin_force(cal, s.design, s.translation_drive, 2);
    if (!(t > 0.0)) throw std::invalid_argument("calibration '" + s.name + "': no thrust at the translation point");
    fit.translation_thrust = t;

    const int rot_fins = s.rotation_fins == RotationFins::Single ? 1 : 2;
    const double f_rot = per_fin_force(cal, s.design, s.rotation_drive, rot_fins);
    if (!(f_rot > 0.0)) throw std::invalid_argument("calibration '" + s.name + "': no thrust at the rotation point");
    fit.rotation_torque = rot_fins * f_rot * s.fin_moment_arm;

    auto& p = fit.params;
    p.fin_moment_arm = s.fin_moment_arm;
    p.body_radius = 0.5 * std::max(s.body_length, s.body_width);
    p.drag_quadratic = t / (s.translation_speed * s.translation_speed);
    if (s.peak_acceleration) {
        p.effective_mass = t / *s.peak_acceleration;
    } else {
        const Fit ref = calibrate_impl(all.at(*s.mass_reference), all, cal, depth + 1);
        p.effective_mass = ref.params.effective_mass * s.mass_ratio;
    }
    p.effective_inertia = p.effective_mass * (s.body_length * s.body_length + s.body_width * s.body_width) / 12.0;
    p.rotational_drag = fit.rotation_torque / (s.rotation_rate * s.rotation_rate);
    p.validate();
    return fit;
}

}  // namespace

Fit calibrate(const AnchorSet& set, const AnchorSets& all, const thrust::ThrustCalibration& cal) {
    return calibrate_impl(set, all, cal, 0);
}

Fit calibrate(const std::string& name) { return calibrate(AnchorSets::bundled().at(name)); }

}  // namespace flatswim::calibration
