#pragma once

// Published surface swimmers: speed against rotation rate.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace flatswim::comparison {

struct ComparisonRow {
    std::string label;
    double characteristic_size = 0.0;     // mm, largest stated dimension
    double speed = 0.0;                   // cm/s
    double relative_speed = 0.0;          // characteristic sizes per second
    std::optional<double> rotation_speed; // °/s
    bool maneuverable = false;
    bool this_work = false;
};

/// Builds a row from stated dimensions (absent ones omitted).
ComparisonRow make_row(std::string label, const std::vector<double>& dims_mm, double speed_cm_s,
                       std::optional<double> rotation_deg_s, bool maneuverable, bool this_work = false);

/// Reads the bundled CSV layout. "yes" and "partial" count as maneuverable.
std::vector<ComparisonRow> load_comparison_table(const std::filesystem::path& path);
const std::vector<ComparisonRow>& bundled_table();

/// Origin-constrained least squares of rotation speed on relative speed,
/// slope = Σωs/Σs², over maneuverable rows with a rotation speed.
/// Throws std::invalid_argument when no row qualifies.
double comparison_fit(const std::vector<ComparisonRow>& rows);

struct FitSensitivity {
    double all_rows = 0.0;          // °/s
    double excluding_this_work = 0.0;
    std::size_t rows_used = 0;
    std::size_t rows_used_excluding = 0;
};

FitSensitivity fit_sensitivity(const std::vector<ComparisonRow>& rows);

}  // namespace flatswim::comparison
