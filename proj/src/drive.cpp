#include "flatswim/drive.hpp"

#include <stdexcept>
#include <string>

#include "flatswim/actuator.hpp"

namespace flatswim {

void DriveSpec::validate() const {
    if (!(f_act > 0.0)) throw std::invalid_argument("drive: f_act must be > 0");
    if (mode == DriveMode::Fixed && !(voltage >= 0.0)) throw std::invalid_argument("drive: voltage must be >= 0");
    if (mode == DriveMode::Hvps) converter.validate();
}

void to_json(nlohmann::json& j, const DriveSpec& d) {
    if (d.mode == DriveMode::Fixed) {
        j = {{"mode", "fixed"}, {"voltage", d.voltage}, {"f_act", d.f_act}};
    } else {
        j = {{"mode", "hvps"},
             {"f_act", d.f_act},
             {"pulse_width_us", d.converter.pulse_width * 1e6},
             {"switching_frequency_khz", d.converter.switching_frequency * 1e-3},
             {"input_voltage", d.converter.input_voltage}};
    }
}

void from_json(const nlohmann::json& j, DriveSpec& d) {
    const std::string mode = j.value("mode", "fixed");
    if (mode == "fixed") {
        d.mode = DriveMode::Fixed;
        d.voltage = j.at("voltage").get<double>();
        d.f_act = j.value("f_act", 40.0);
    } else if (mode == "hvps") {
        d.mode = DriveMode::Hvps;
        d.f_act = j.value("f_act", 30.0);
        d.converter.pulse_width = j.value("pulse_width_us", 2.5) * 1e-6;
        d.converter.switching_frequency = j.value("switching_frequency_khz", 20.0) * 1e3;
        d.converter.input_voltage = j.value("input_voltage", 3.9);
    } else {
        throw std::invalid_argument("drive: mode must be 'fixed' or 'hvps'");
    }
}

double drive_voltage(const DriveSpec& drive, int active_fins) {
    if (drive.mode == DriveMode::Fixed) return drive.voltage;
    if (active_fins > hvps::OutputMap::kMaxChannels)
        throw std::invalid_argument("drive: the HVPS has only two channels");
    return hvps::output_voltage(drive.converter, active_fins, drive.f_act);
}

double per_fin_force(const thrust::ThrustCalibration& cal, const thrust::ModuleDesign& design,
                     const DriveSpec& drive, int active_fins) {
    if (active_fins <= 0) return 0.0;
    return 0.5e-3 * thrust::blocked_force(cal, design, drive.f_act, drive_voltage(drive, active_fins));
}

double drive_power_W(const DriveSpec& drive, const thrust::ModuleDesign& design, int active_fins,
                     const hvps::PowerBudget& budget) {
    if (drive.mode == DriveMode::Hvps) {
        hvps::PowerState s;
        s.mode = active_fins > 0 ? hvps::PowerMode::Driving : hvps::PowerMode::ConverterOn;
        s.active_channels = active_fins;
        s.f_act = drive.f_act;
        return hvps::system_power(s, budget);
    }
    if (active_fins <= 0) return 0.0;
    const auto stack = design.variant == thrust::Variant::PET ? actuator::pet_stack() : actuator::pvdf_stack();
    return active_fins * actuator::drive_power(actuator::effective_capacitance(stack), drive.f_act, drive.voltage);
}

}  // namespace flatswim
