#pragma once

// Virtual blocked-force instrument: a clamped glass cantilever whose
// flexural rigidity comes from its first resonance, read out by a
// displacement sensor.

#include <filesystem>
#include <optional>
#include <span>
#include <vector>

namespace flatswim::cantilever {

struct CantileverSpec {
    double rho = 0.936e-3;       // kg/m
    double length = 67e-3;       // m
    double contact_point = 66e-3;  // b: where the swimmer pushes
    double sensor_point = 50e-3;   // a: where the deflection is read
    std::optional<double> resonance;          // Hz
    std::optional<double> flexural_rigidity;  // N·m²

    void validate() const;
    /// EI from whichever source is configured.
    double ei() const;

    /// The bench instrument: 55.576 Hz resonance, 0.936 mg/mm, 67 mm.
    static CantileverSpec bench();
};

/// EI = (4π²/3.5²)·f²·ρ·l⁴.
double flexural_rigidity(double resonance, double rho, double length);

/// Static deflection at `x` of a clamped beam loaded by `force` at `b`.
double deflection(double x, double force, double b, double ei);

/// Force that produces deflection `d_meas` at the sensor point `a`.
double force_from_deflection(double d_meas, double a, double b, double ei);

struct TraceSample {
    double t = 0.0;  // s since activation
    double d = 0.0;  // m
};

struct AveragingWindow {
    double start = 2.5;
    double end = 5.0;
};

/// Time-averaged blocked force over the averaging window (trapezoidal mean
/// of the per-sample forces). Samples outside the window are ignored.
double measure_blocked_force(std::span<const TraceSample> trace, const CantileverSpec& spec,
                             AveragingWindow window = {});

std::vector<TraceSample> read_trace_csv(const std::filesystem::path& path);
void write_trace_csv(const std::filesystem::path& path, std::span<const TraceSample> trace);

}  // namespace flatswim::cantilever
