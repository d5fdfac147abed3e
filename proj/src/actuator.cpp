#include "flatswim/actuator.hpp"

#include <cmath>
#include <stdexcept>

namespace flatswim::actuator {

void ActuatorStack::validate() const {
    if (!(eps_solid >= 1.0)) throw std::invalid_argument("actuator stack: eps_solid must be >= 1");
    if (!(eps_liquid >= 1.0)) throw std::invalid_argument("actuator stack: eps_liquid must be >= 1");
    if (!(t_solid > 0.0)) throw std::invalid_argument("actuator stack: t_solid must be > 0");
    if (!(t_liquid_gap >= 0.0)) throw std::invalid_argument("actuator stack: t_liquid_gap must be >= 0");
    if (!(area > 0.0)) throw std::invalid_argument("actuator stack: area must be > 0");
}

ActuatorStack pet_stack(double area, double eps_liquid, double liquid_gap) {
    return {2.2, 12e-6, eps_liquid, liquid_gap, area};
}

ActuatorStack pvdf_stack(double area, double eps_liquid, double liquid_gap) {
    return {40.0, 14e-6, eps_liquid, liquid_gap, area};
}

namespace {

// eps_s·eps_l/(t_s·eps_l + t_l1·eps_s), shared by capacitance and force.
double permittivity_factor(const ActuatorStack& s) {
    return s.eps_solid * s.eps_liquid / (s.t_solid * s.eps_liquid + s.t_liquid_gap * s.eps_solid);
}

}  // namespace

double effective_capacitance(const ActuatorStack& stack) {
    stack.validate();
    return kVacuumPermittivity * stack.area * permittivity_factor(stack);
}

VariantGain variant_gain(const ActuatorStack& a, const ActuatorStack& b) {
    a.validate();
    b.validate();
    if (a.area != b.area) throw std::invalid_argument("variant_gain: stacks must share the same area");
    const double gain = permittivity_factor(b) / permittivity_factor(a);
    return {gain, std::sqrt(gain)};
}

double force_scale(const ActuatorStack& stack, double voltage) {
    stack.validate();
    if (voltage < 0.0) throw std::invalid_argument("force_scale: voltage must be >= 0");
    return 0.5 * voltage * voltage * permittivity_factor(stack);
}

double drive_power(double capacitance, double f_act, double voltage) {
    if (capacitance < 0.0 || f_act < 0.0 || voltage < 0.0)
        throw std::invalid_argument("drive_power: inputs must be >= 0");
    return capacitance * f_act * voltage * voltage / 2.0;
}

double capacitance_from_power_sweep(std::span<const PowerSample> samples, double voltage) {
    if (!(voltage > 0.0)) throw std::invalid_argument("power sweep: voltage must be > 0");
    if (samples.size() < 2) throw std::invalid_argument("power sweep: need at least two samples");

    double mean_f = 0.0;
    double mean_p = 0.0;
    for (const auto& s : samples) {
        mean_f += s.f_act;
        mean_p += s.power;
    }
    mean_f /= static_cast<double>(samples.size());
    mean_p /= static_cast<double>(samples.size());

    double sff = 0.0;
    double sfp = 0.0;
    for (const auto& s : samples) {
        const double df = s.f_act - mean_f;
        sff += df * df;
        sfp += df * (s.power - mean_p);
    }
    if (sff == 0.0) throw std::invalid_argument("power sweep: all frequencies are equal");

    const double slope = sfp / sff;  // W/Hz
    return slope / (voltage * voltage / 2.0);
}

double actuation_frequency(const DriveSignal& signal) {
    if (signal.amplitude < 0.0 || signal.signal_frequency < 0.0)
        throw std::invalid_argument("drive signal: amplitude and frequency must be >= 0");
    // Both bipolar waveforms pass through zero twice per period.
    return 2.0 * signal.signal_frequency;
}

}  // namespace flatswim::actuator
