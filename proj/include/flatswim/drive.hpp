#pragma once

// Operating point of the fin drive: a fixed bench supply or the onboard HVPS.

#include <json.hpp>

#include "flatswim/hvps.hpp"
#include "flatswim/thrust.hpp"

namespace flatswim {

enum class DriveMode { Fixed, Hvps };

struct DriveSpec {
    DriveMode mode = DriveMode::Fixed;
    double voltage = 1700.0;  // V, fixed mode only
    double f_act = 40.0;      // Hz
    hvps::ConverterConfig converter;

    void validate() const;
};

/// {"mode":"fixed","voltage":V,"f_act":Hz} or
/// {"mode":"hvps","f_act":Hz,"pulse_width_us":..,"switching_frequency_khz":..,"input_voltage":..}.
void to_json(nlohmann::json& j, const DriveSpec& d);
void from_json(const nlohmann::json& j, DriveSpec& d);

/// Peak voltage across each driven fin. The HVPS output sags with the
/// number of switching channels.
double drive_voltage(const DriveSpec& drive, int active_fins);

/// Blocked force of one fin in newtons: half the module's pair force.
double per_fin_force(const thrust::ThrustCalibration& cal, const thrust::ModuleDesign& design,
                     const DriveSpec& drive, int active_fins);

/// Electrical power in watts. HVPS builds draw the board budget (converter
/// idling when no fin is driven); bench-supplied builds draw C·f·U²/2 per
/// driven fin.
double drive_power_W(const DriveSpec& drive, const thrust::ModuleDesign& design, int active_fins,
                     const hvps::PowerBudget& budget = {});

}  // namespace flatswim
