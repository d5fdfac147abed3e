#pragma once

// Empirical blocked-force response surface anchored on measured operating
// points, plus efficiency and lifetime degradation.

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace flatswim::thrust {

enum class Variant { PET, PVDF };

std::string_view to_string(Variant v);
Variant parse_variant(std::string_view s);

struct ModuleDesign {
    int body_length_mm = 45;
    int fin_span_mm = 20;
    int actuator_count = 2;
    Variant variant = Variant::PET;

    /// Throws std::invalid_argument outside the fabricated design space.
    void validate() const;
    /// Stable identifier, e.g. "PET-45-20-2".
    std::string key() const;

    friend bool operator==(const ModuleDesign&, const ModuleDesign&) = default;
};

void to_json(nlohmann::json& j, const ModuleDesign& d);
void from_json(const nlohmann::json& j, ModuleDesign& d);

struct VoltageAnchor {
    double voltage = 0.0;   // V
    double force_mN = 0.0;  // blocked force at f_opt
};

/// Calibration of one module design.
struct DesignEntry {
    ModuleDesign design;
    double f_opt = 40.0;  // Hz
    double peak_force_mN = 0.0;
    std::optional<double> power_at_peak_mW;
    /// Monotone anchors at f_opt, starting at (threshold, 0).
    std::vector<VoltageAnchor> voltage_anchors;
    /// Above the last anchor the last slope continues up to this voltage, then clamps.
    double clamp_voltage = 0.0;
    /// Tent half-widths: g = 0.5 at f_opt ± half_width.
    double half_width_low = 20.0;
    double half_width_high = 20.0;
    bool measured_anchor = false;  // reproduces a measured operating point

    /// Normalized frequency response g(f), with g(f_opt) = 1.
    double frequency_response(double f_act) const;
    /// Force at f_opt for `voltage`, in mN.
    double force_at_optimum(double voltage) const;
};

struct ThrustCalibration {
    std::map<Variant, double> threshold_voltage;
    std::vector<DesignEntry> designs;

    /// Throws std::invalid_argument when the design has no calibration.
    const DesignEntry& entry(const ModuleDesign& design) const;
    bool contains(const ModuleDesign& design) const;
    void validate() const;

    static ThrustCalibration from_json(const nlohmann::json& j);
    static ThrustCalibration load(const std::filesystem::path& path);
    /// The calibration bundled under data/.
    static const ThrustCalibration& bundled();
};

/// Blocked propulsion force in mN: g(f_act)·interp(voltage_anchors, voltage).
/// Zero at or below the variant threshold voltage.
double blocked_force(const ThrustCalibration& cal, const ModuleDesign& design, double f_act,
                     double voltage);

struct DesignPeak {
    double f_opt = 0.0;  // Hz
    double peak_force_mN = 0.0;
    std::optional<double> power_mW;
};

DesignPeak design_peak(const ThrustCalibration& cal, const ModuleDesign& design);

/// Blocked force per electrical input power. mN/mW is numerically N/W.
double efficiency(double force_mN, double power_mW);

struct DegradationModel {
    double stable_cycles = 0.0;   // full performance up to here
    double plateau_cycles = 0.0;  // decay reaches the plateau here
    double plateau_level = 0.45;
    double lifetime_cycles = 0.0;  // critical failure at or beyond

    void validate() const;
    /// Stable for 5 minutes and plateau by 30 minutes of running at `f_ref`.
    static DegradationModel for_operation(double f_ref, double lifetime_cycles,
                                          double stable_s = 300.0, double plateau_s = 1800.0,
                                          double plateau_level = 0.45);
    static DegradationModel defaults(Variant variant);
};

struct Degradation {
    double multiplier = 1.0;  // in (0, 1]
    bool failed = false;
};

Degradation degradation_factor(double cycles, const DegradationModel& model);
Degradation degradation_factor(double cycles, Variant variant);

}  // namespace flatswim::thrust
