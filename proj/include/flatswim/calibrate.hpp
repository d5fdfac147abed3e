#pragma once

// Fits effective mass, inertia and drag so the dynamics reproduce measured
// swimming speeds. The fit is a calibration, not a hydrodynamic model.

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "flatswim/drive.hpp"
#include "flatswim/dynamics.hpp"
#include "flatswim/thrust.hpp"

namespace flatswim::calibration {

enum class RotationFins { Single, Diagonal };

/// Measured motion targets for one build.
struct AnchorSet {
    std::string name;
    thrust::ModuleDesign design;
    double body_length = 0.045;   // m
    double body_width = 0.055;    // m
    double fin_moment_arm = 0.02; // m
    DriveSpec translation_drive;
    double translation_speed = 0.0;             // m/s, steady
    std::optional<double> peak_acceleration;    // m/s², sets the mass when present
    DriveSpec rotation_drive;
    RotationFins rotation_fins = RotationFins::Single;
    double rotation_rate = 0.0;                 // rad/s, steady
    /// Mass borrowed from another set, scaled by mass_ratio, when no
    /// peak acceleration is given.
    std::optional<std::string> mass_reference;
    double mass_ratio = 1.0;

    void validate() const;
};

AnchorSet anchor_set_from_json(const std::string& name, const nlohmann::json& j);

struct AnchorSets {
    std::map<std::string, AnchorSet> sets;

    const AnchorSet& at(const std::string& name) const;
    static AnchorSets from_json(const nlohmann::json& j);
    static AnchorSets load(const std::filesystem::path& path);
    static const AnchorSets& bundled();
};

struct Fit {
    std::string name;
    dynamics::DynamicsParams params;
    double translation_thrust = 0.0;  // N, total
    double rotation_torque = 0.0;     // N·m
    double translation_speed = 0.0;   // m/s target
    double rotation_rate = 0.0;       // rad/s target
};

/// Closed-form fit: thrust T at the translation point gives
/// c_d = T/v², m_eff = T/a_peak (or the referenced mass scaled),
/// I_eff = m_eff·(L² + W²)/12 and c_r = τ/ω² for the rotation torque.
Fit calibrate(const AnchorSet& set, const AnchorSets& all = AnchorSets::bundled(),
              const thrust::ThrustCalibration& cal = thrust::ThrustCalibration::bundled());
Fit calibrate(const std::string& name);

}  // namespace flatswim::calibration
