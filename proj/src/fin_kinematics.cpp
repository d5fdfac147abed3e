#include "flatswim/fin_kinematics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace flatswim::fin {

void FinWaveSpec::validate() const {
    if (!(fin_length > 0.0)) throw std::invalid_argument("fin spec: fin_length must be > 0");
    if (!(wavelength_constant > 0.0))
        throw std::invalid_argument("fin spec: wavelength_constant must be > 0");
    for (std::size_t i = 0; i < amplitude_table.size(); ++i) {
        if (amplitude_table[i].peak_to_peak < 0.0)
            throw std::invalid_argument("fin spec: amplitudes must be >= 0");
        if (i > 0 && !(amplitude_table[i].f_act > amplitude_table[i - 1].f_act))
            throw std::invalid_argument("fin spec: amplitude table frequencies must increase strictly");
    }
}

FinWaveSpec FinWaveSpec::defaults() {
    FinWaveSpec spec;
    spec.fin_length = 45e-3;
    spec.wavelength_constant = kappa_from_wave_count(spec.fin_length, kAnchorFrequency, kAnchorWaveCount);
    spec.amplitude_table = {
        {10.0, 6.0e-3}, {20.0, 5.0e-3}, {30.0, 4.0e-3}, {40.0, 3.2e-3},
        {60.0, 2.2e-3}, {80.0, 1.5e-3}, {100.0, 1.0e-3},
    };
    return spec;
}

double kappa_from_wave_count(double fin_length, double f_act, double waves) {
    if (!(fin_length > 0.0) || !(f_act > 0.0) || !(waves > 0.0))
        throw std::invalid_argument("kappa_from_wave_count: inputs must be > 0");
    return fin_length * f_act / waves;
}

double wavelength_at(const FinWaveSpec& spec, double f_act) {
    if (!(f_act > 0.0)) throw std::invalid_argument("wavelength_at: f_act must be > 0");
    return spec.wavelength_constant / f_act;
}

double wave_count(const FinWaveSpec& spec, double f_act) {
    return spec.fin_length / wavelength_at(spec, f_act);
}

double peak_to_peak_at(const FinWaveSpec& spec, double f_act) {
    const auto& table = spec.amplitude_table;
    if (table.empty()) return 0.0;
    if (f_act <= table.front().f_act) return table.front().peak_to_peak;
    if (f_act >= table.back().f_act) return table.back().peak_to_peak;
    const auto hi = std::upper_bound(table.begin(), table.end(), f_act,
                                     [](double f, const AmplitudeNode& n) { return f < n.f_act; });
    const auto lo = hi - 1;
    const double w = (f_act - lo->f_act) / (hi->f_act - lo->f_act);
    return lo->peak_to_peak + w * (hi->peak_to_peak - lo->peak_to_peak);
}

double envelope(double x, double fin_length) {
    const double s = std::clamp(x / (0.2 * fin_length), 0.0, 1.0);
    return s * s * (3.0 - 2.0 * s);
}

double fin_height(const FinWaveSpec& spec, double f_act, double t, double x) {
    if (!(f_act > 0.0)) return 0.0;
    const double lambda = wavelength_at(spec, f_act);
    const double half_amp = 0.5 * peak_to_peak_at(spec, f_act);
    const double phase = 2.0 * std::numbers::pi * (x / lambda - f_act * t);
    return envelope(x, spec.fin_length) * half_amp * std::sin(phase);
}

std::vector<ProfilePoint> fin_profile(const FinWaveSpec& spec, double f_act, double t,
                                      std::size_t samples) {
    if (samples < 2) throw std::invalid_argument("fin_profile: need at least two samples");
    std::vector<ProfilePoint> out(samples);
    const double dx = spec.fin_length / static_cast<double>(samples - 1);
    for (std::size_t i = 0; i < samples; ++i) {
        const double x = dx * static_cast<double>(i);
        out[i] = {x, fin_height(spec, f_act, t, x)};
    }
    return out;
}

}  // namespace flatswim::fin
