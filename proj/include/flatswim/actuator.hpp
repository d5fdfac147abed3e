#pragma once

// Closed-form electrostatics of the zipping electrohydraulic actuator.

#include <span>

namespace flatswim::actuator {

inline constexpr double kVacuumPermittivity = 8.8541878128e-12;  // F/m

/// Default relative permittivity of the fluorocarbon liquid dielectric.
inline constexpr double kDefaultLiquidPermittivity = 1.9;
/// Default residual liquid gap in the zipped state.
inline constexpr double kDefaultLiquidGap = 2e-6;

/// Dielectric layer stack of the zipped region. All lengths in metres.
struct ActuatorStack {
    double eps_solid = 2.2;
    double t_solid = 12e-6;
    double eps_liquid = kDefaultLiquidPermittivity;
    double t_liquid_gap = kDefaultLiquidGap;
    double area = 90e-6;  // m²

    /// Throws std::invalid_argument when an invariant is violated.
    void validate() const;
};

/// 12 µm PET film, relative permittivity 2.2.
ActuatorStack pet_stack(double area = 90e-6, double eps_liquid = kDefaultLiquidPermittivity,
                        double liquid_gap = kDefaultLiquidGap);
/// 14 µm PVDF-terpolymer film, relative permittivity 40.
ActuatorStack pvdf_stack(double area = 90e-6, double eps_liquid = kDefaultLiquidPermittivity,
                         double liquid_gap = kDefaultLiquidGap);

/// Capacitance of the zipped region in farads:
/// eps0 * A * eps_s * eps_l / (t_s * eps_l + t_l1 * eps_s).
double effective_capacitance(const ActuatorStack& stack);

struct VariantGain {
    double capacitance_gain = 1.0;
    /// Voltage reduction for equal force, sqrt(capacitance_gain).
    double voltage_reduction = 1.0;
};

/// Gain of `b` over `a`. Both stacks must share the same electrode area.
VariantGain variant_gain(const ActuatorStack& a, const ActuatorStack& b);

/// Relative electrostatic force ½U²·eps_s·eps_l/(t_s·eps_l + t_l1·eps_s).
/// The geometric factor is not modelled; only ratios are meaningful.
double force_scale(const ActuatorStack& stack, double voltage);

/// Charge/discharge power C·f·U²/2 in watts.
double drive_power(double capacitance, double f_act, double voltage);

struct PowerSample {
    double f_act = 0.0;  // Hz
    double power = 0.0;  // W
};

/// Effective capacitance from a frequency sweep at fixed voltage: the
/// least-squares slope of power over frequency divided by U²/2.
double capacitance_from_power_sweep(std::span<const PowerSample> samples, double voltage);

enum class Waveform { BipolarSquare, BipolarTriangle };

struct DriveSignal {
    Waveform waveform = Waveform::BipolarSquare;
    double amplitude = 0.0;         // V
    double signal_frequency = 0.0;  // Hz
};

/// The actuator responds to U², so one bipolar period gives two strokes.
double actuation_frequency(const DriveSignal& signal);

}  // namespace flatswim::actuator
