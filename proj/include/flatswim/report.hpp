#pragma once

// Plot-ready artifacts from telemetry and the thrust tables.

#include <cstdint>
#include <filesystem>
#include <string_view>
#include <vector>

#include "flatswim/simulation.hpp"
#include "flatswim/thrust.hpp"

namespace flatswim::report {

enum class ReportKind { SpeedCurve, ForceMap, LicFrame, Summary };

std::string_view to_string(ReportKind kind);
/// Throws std::invalid_argument for an unknown kind.
ReportKind parse_report_kind(std::string_view s);

struct ReportOptions {
    std::filesystem::path out_dir = ".";
    std::uint64_t seed = 0;                // lic-frame noise
    double body_length = 0.045;            // m
    double characteristic_size = 0.055;    // m
    double steady_window = 2.0;            // s
    unsigned workers = 1;
};

/// Voltage and frequency grids of the force map.
std::vector<double> force_map_voltages();  // V, 0..2200 in 50 V steps
std::vector<double> force_map_frequencies();  // Hz, 5..80 in 5 Hz steps

/// Writes the artifact for `kind` into out_dir and returns the files written:
///   speed-curve  speed_curve.csv   t, speed, |ω| per telemetry row
///   force-map    force_map.csv     blocked force of every bundled design over the grids
///   lic-frame    lic_frame.png     LIC of the wake at the steady speed
///   summary      summary.json      run summary recomputed from the rows
/// Output bytes depend only on the rows and the options.
std::vector<std::filesystem::path> report(const std::vector<sim::TelemetryRow>& rows, ReportKind kind,
                                          const ReportOptions& options = {});

}  // namespace flatswim::report
