#include "flatswim/thrust.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "flatswim/data.hpp"

namespace flatswim::thrust {

std::string_view to_string(Variant v) { return v == Variant::PET ? "PET" : "PVDF"; }

Variant parse_variant(std::string_view s) {
    if (s == "PET") return Variant::PET;
    if (s == "PVDF") return Variant::PVDF;
    throw std::invalid_argument("unknown dielectric variant '" + std::string(s) + "'");
}

void ModuleDesign::validate() const {
    constexpr std::array bodies{25, 35, 45};
    constexpr std::array spans{10, 15, 20, 25, 30};
    if (std::find(bodies.begin(), bodies.end(), body_length_mm) == bodies.end())
        throw std::invalid_argument("module design: body_length_mm must be 25, 35 or 45");
    if (std::find(spans.begin(), spans.end(), fin_span_mm) == spans.end())
        throw std::invalid_argument("module design: fin_span_mm must be one of 10, 15, 20, 25, 30");
    if (actuator_count != 2 && actuator_count != 4)
        throw std::invalid_argument("module design: actuator_count must be 2 or 4");
    if (actuator_count == 4 && body_length_mm != 45)
        throw std::invalid_argument("module design: 4-actuator modules exist only at 45 mm body length");
}

std::string ModuleDesign::key() const {
    return std::string(to_string(variant)) + "-" + std::to_string(body_length_mm) + "-" +
           std::to_string(fin_span_mm) + "-" + std::to_string(actuator_count);
}

void to_json(nlohmann::json& j, const ModuleDesign& d) {
    j = {{"body_length_mm", d.body_length_mm},
         {"fin_span_mm", d.fin_span_mm},
         {"actuator_count", d.actuator_count},
         {"variant", std::string(to_string(d.variant))}};
}

void from_json(const nlohmann::json& j, ModuleDesign& d) {
    d.body_length_mm = j.value("body_length_mm", 45);
    d.fin_span_mm = j.value("fin_span_mm", 20);
    d.actuator_count = j.value("actuator_count", 2);
    d.variant = parse_variant(j.value("variant", std::string("PET")));
}

double DesignEntry::frequency_response(double f_act) const {
    const double hw = f_act < f_opt ? half_width_low : half_width_high;
    return std::max(0.0, 1.0 - std::abs(f_act - f_opt) / (2.0 * hw));
}

double DesignEntry::force_at_optimum(double voltage) const {
    const auto& a = voltage_anchors;
    if (voltage <= a.front().voltage) return 0.0;
    if (voltage <= a.back().voltage) {
        const auto hi = std::lower_bound(a.begin(), a.end(), voltage,
                                         [](const VoltageAnchor& n, double v) { return n.voltage < v; });
        if (hi->voltage == voltage) return hi->force_mN;
        const auto lo = hi - 1;
        const double w = (voltage - lo->voltage) / (hi->voltage - lo->voltage);
        return lo->force_mN + w * (hi->force_mN - lo->force_mN);
    }
    const auto& last = a[a.size() - 1];
    const auto& prev = a[a.size() - 2];
    const double slope = (last.force_mN - prev.force_mN) / (last.voltage - prev.voltage);
    const double v = std::min(voltage, std::max(clamp_voltage, last.voltage));
    return last.force_mN + slope * (v - last.voltage);
}

const DesignEntry& ThrustCalibration::entry(const ModuleDesign& design) const {
    for (const auto& e : designs)
        if (e.design == design) return e;
    throw std::invalid_argument("thrust calibration: unknown design " + design.key());
}

bool ThrustCalibration::contains(const ModuleDesign& design) const {
    return std::any_of(designs.begin(), designs.end(), [&](const auto& e) { return e.design == design; });
}

void ThrustCalibration::validate() const {
    for (const auto& e : designs) {
        e.design.validate();
        const std::string where = "thrust calibration " + e.design.key() + ": ";
        const auto th = threshold_voltage.find(e.design.variant);
        if (th == threshold_voltage.end()) throw std::invalid_argument(where + "missing threshold voltage");
        if (e.voltage_anchors.size() < 2) throw std::invalid_argument(where + "need at least two anchors");
        if (e.voltage_anchors.front().voltage != th->second || e.voltage_anchors.front().force_mN != 0.0)
            throw std::invalid_argument(where + "anchors must start at (threshold, 0)");
        for (std::size_t i = 1; i < e.voltage_anchors.size(); ++i) {
            const auto& lo = e.voltage_anchors[i - 1];
            const auto& hi = e.voltage_anchors[i];
            if (!(hi.voltage > lo.voltage) || hi.force_mN < lo.force_mN)
                throw std::invalid_argument(where + "anchors must be monotone");
        }
        if (!(e.half_width_low > 0.0) || !(e.half_width_high > 0.0) || !(e.f_opt > 0.0))
            throw std::invalid_argument(where + "frequency response parameters must be > 0");
    }
}

ThrustCalibration ThrustCalibration::from_json(const nlohmann::json& j) {
    ThrustCalibration cal;
    for (const auto& [name, v] : j.at("threshold_voltage").items())
        cal.threshold_voltage[parse_variant(name)] = v.get<double>();
    for (const auto& d : j.at("designs")) {
        DesignEntry e;
        e.design = d.at("design").get<ModuleDesign>();
        e.f_opt = d.at("f_opt").get<double>();
        e.peak_force_mN = d.at("peak_force_mN").get<double>();
        if (d.contains("power_at_peak_mW") && !d["power_at_peak_mW"].is_null())
            e.power_at_peak_mW = d["power_at_peak_mW"].get<double>();
        for (const auto& a : d.at("voltage_anchors"))
            e.voltage_anchors.push_back({a.at(0).get<double>(), a.at(1).get<double>()});
        e.clamp_voltage = d.value("clamp_voltage", e.voltage_anchors.back().voltage);
        e.half_width_low = d.value("half_width_low", 20.0);
        e.half_width_high = d.value("half_width_high", 20.0);
        e.measured_anchor = d.value("measured_anchor", false);
        cal.designs.push_back(std::move(e));
    }
    cal.validate();
    return cal;
}

ThrustCalibration ThrustCalibration::load(const std::filesystem::path& path) {
    return from_json(read_json(path));
}

const ThrustCalibration& ThrustCalibration::bundled() {
    static const ThrustCalibration cal = load(data_dir() / "thrust_calibration.json");
    return cal;
}

double blocked_force(const ThrustCalibration& cal, const ModuleDesign& design, double f_act,
                     double voltage) {
    const DesignEntry& e = cal.entry(design);
    if (voltage <= cal.threshold_voltage.at(design.variant)) return 0.0;
    return e.frequency_response(f_act) * e.force_at_optimum(voltage);
}

DesignPeak design_peak(const ThrustCalibration& cal, const ModuleDesign& design) {
    const DesignEntry& e = cal.entry(design);
    return {e.f_opt, e.peak_force_mN, e.power_at_peak_mW};
}

double efficiency(double force_mN, double power_mW) {
    if (!(power_mW > 0.0)) throw std::invalid_argument("efficiency: power must be > 0");
    return force_mN / power_mW;
}

void DegradationModel::validate() const {
    if (stable_cycles < 0.0 || plateau_cycles < stable_cycles || lifetime_cycles <= 0.0)
        throw std::invalid_argument("degradation model: need 0 <= stable <= plateau and lifetime > 0");
    if (!(plateau_level > 0.0 && plateau_level <= 1.0))
        throw std::invalid_argument("degradation model: plateau_level must be in (0, 1]");
}

DegradationModel DegradationModel::for_operation(double f_ref, double lifetime_cycles, double stable_s,
                                                 double plateau_s, double plateau_level) {
    return {f_ref * stable_s, f_ref * plateau_s, plateau_level, lifetime_cycles};
}

DegradationModel DegradationModel::defaults(Variant variant) {
    // PVDF: 768,600 cycles to critical failure at 30 Hz. PET: 160 min of
    // cumulative operation at 40 Hz without failure is the longest record.
    return variant == Variant::PVDF ? for_operation(30.0, 768'600.0) : for_operation(40.0, 384'000.0);
}

Degradation degradation_factor(double cycles, const DegradationModel& model) {
    if (cycles < 0.0) throw std::invalid_argument("degradation_factor: cycles must be >= 0");
    Degradation d;
    d.failed = cycles >= model.lifetime_cycles;
    if (cycles <= model.stable_cycles) {
        d.multiplier = 1.0;
    } else if (cycles >= model.plateau_cycles) {
        d.multiplier = model.plateau_level;
    } else {
        const double s = (cycles - model.stable_cycles) / (model.plateau_cycles - model.stable_cycles);
        const double smooth = s * s * (3.0 - 2.0 * s);
        d.multiplier = 1.0 - (1.0 - model.plateau_level) * smooth;
    }
    return d;
}

Degradation degradation_factor(double cycles, Variant variant) {
    return degradation_factor(cycles, DegradationModel::defaults(variant));
}

}  // namespace flatswim::thrust
