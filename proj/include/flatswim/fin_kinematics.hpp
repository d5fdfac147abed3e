#pragma once

// Traveling-wave geometry of the soft pectoral fin.

#include <cstddef>
#include <vector>

namespace flatswim::fin {

struct AmplitudeNode {
    double f_act = 0.0;         // Hz
    double peak_to_peak = 0.0;  // m
};

/// Wave description of one fin. The wavelength follows lambda = kappa / f_act.
struct FinWaveSpec {
    double fin_length = 45e-3;
    std::vector<AmplitudeNode> amplitude_table;
    double wavelength_constant = 0.45;  // kappa, m·Hz

    void validate() const;

    /// 45 mm fin with 1.6 waves at 16 Hz and a monotone decreasing
    /// amplitude table. The amplitudes are configuration defaults.
    static FinWaveSpec defaults();
};

/// Frequency at which the default spec is anchored, and its wave count.
inline constexpr double kAnchorFrequency = 16.0;
inline constexpr double kAnchorWaveCount = 1.6;

/// kappa such that `waves` wavelengths fit on the fin at `f_act`.
double kappa_from_wave_count(double fin_length, double f_act, double waves);

double wavelength_at(const FinWaveSpec& spec, double f_act);
/// Number of wavelengths on the fin, L·f/kappa.
double wave_count(const FinWaveSpec& spec, double f_act);
/// Piecewise-linear in the amplitude table, clamped at its ends.
double peak_to_peak_at(const FinWaveSpec& spec, double f_act);

/// Clamped-root envelope: smoothstep over the first 20 % of the fin, 1 beyond.
double envelope(double x, double fin_length);

/// Fin deflection z(x, t) = env(x)·(A_pp/2)·sin(2π(x/λ − f·t)).
double fin_height(const FinWaveSpec& spec, double f_act, double t, double x);

struct ProfilePoint {
    double x = 0.0;
    double z = 0.0;
};

/// `samples` evenly spaced points from root (x = 0) to tip (x = L).
std::vector<ProfilePoint> fin_profile(const FinWaveSpec& spec, double f_act, double t,
                                      std::size_t samples);

}  // namespace flatswim::fin
