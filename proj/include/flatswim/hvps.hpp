#pragma once

// Onboard high-voltage supply: open-loop flyback converter output map,
// full-bridge bipolar drive, system power budget and battery endurance.

#include <array>
#include <filesystem>
#include <vector>

#include <json.hpp>

namespace flatswim::hvps {

/// Control signal of the flyback switch.
struct ConverterConfig {
    double pulse_width = 2.5e-6;          // s
    double switching_frequency = 20e3;    // Hz
    double input_voltage = 3.9;           // V

    /// Throws std::invalid_argument outside 1–3 µs, 1–20 kHz, or for input <= 0.
    void validate() const;
};

/// Peak converter output as a bilinear map over (pulse width, switching
/// frequency), one grid per number of active channels, measured at a
/// reference actuation frequency and input voltage.
class OutputMap {
public:
    static constexpr int kMaxChannels = 2;

    OutputMap(std::vector<double> pulse_widths, std::vector<double> switching_frequencies,
              std::array<std::vector<double>, kMaxChannels + 1> grids, double reference_f_act,
              double reference_input_voltage, double max_load_scale);

    static OutputMap from_json(const nlohmann::json& j);
    static OutputMap load(const std::filesystem::path& path);
    static const OutputMap& bundled();

    /// Output voltage in volts. Between 0 Hz and the reference actuation
    /// frequency the load droop grows linearly from none to the measured
    /// droop, and keeps growing above it up to `max_load_scale` times.
    double output_voltage(const ConverterConfig& cfg, int active_channels, double f_act) const;

    double reference_f_act() const { return reference_f_act_; }
    const std::vector<double>& pulse_widths() const { return pulse_widths_; }
    const std::vector<double>& switching_frequencies() const { return switching_frequencies_; }

private:
    double grid_value(int channels, double pulse_width, double switching_frequency) const;

    std::vector<double> pulse_widths_;
    std::vector<double> switching_frequencies_;
    std::array<std::vector<double>, kMaxChannels + 1> grids_;  // row-major [pw][fs]
    double reference_f_act_;
    double reference_input_voltage_;
    double max_load_scale_;
};

double output_voltage(const ConverterConfig& cfg, int active_channels, double f_act);

enum class PowerMode { Idle, ConverterOn, Driving };

struct PowerState {
    PowerMode mode = PowerMode::Idle;
    int active_channels = 0;
    double f_act = 0.0;  // Hz

    void validate() const;
};

/// Measured board power levels. The actuator share scales linearly with
/// channel count and actuation frequency from its two-channel reference.
struct PowerBudget {
    double idle_mW = 237.0;
    double converter_on_mW = 530.0;
    double actuator_increment_mW = 65.0;  // both channels at the reference frequency
    double reference_f_act = 30.0;
};

/// Board power in watts.
double system_power(const PowerState& state, const PowerBudget& budget = {});

/// Seconds of operation from an ideal constant-voltage battery.
double battery_endurance(double capacity_mAh, double nominal_voltage, const PowerState& state,
                         const PowerBudget& budget = {});

/// Signed full-bridge output of `channel` (0 or 1) at time `t`: a bipolar
/// square wave at `f_sig` whose amplitude is the loaded converter voltage.
/// `active_mask` has bit c set when channel c is switching.
double bridge_output(double t, const ConverterConfig& cfg, double f_sig, int channel, unsigned active_mask,
                     const OutputMap& map = OutputMap::bundled());

}  // namespace flatswim::hvps
