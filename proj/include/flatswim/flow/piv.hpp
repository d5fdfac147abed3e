#pragma once

// Multi-grid FFT cross-correlation PIV.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "flatswim/flow/image.hpp"
#include "flatswim/geometry.hpp"

namespace flatswim::flow {

/// Pixel-space rectangle, inclusive of its edges.
struct PixelRect {
    double x0 = 0.0;
    double y0 = 0.0;
    double x1 = 0.0;
    double y1 = 0.0;
    bool contains(double x, double y) const { return x >= x0 && x <= x1 && y >= y0 && y <= y1; }
};

struct PivParams {
    int final_window = 96;          // px
    int step = 10;                  // px, final grid spacing
    int levels = 3;                 // window halves each level down to final_window
    int final_passes = 2;           // refinement passes at the final window
    std::optional<PixelRect> mask;  // windows centred inside are not correlated
    double mm_per_vector = 2.04;    // physical grid spacing
    double outlier_threshold = 2.0; // normalized median test
    double outlier_epsilon = 0.1;   // px
    unsigned workers = 1;           // 0 = hardware concurrency

    void validate() const;
};

struct DisplacementGrid {
    std::size_t nx = 0;
    std::size_t ny = 0;
    std::vector<double> xs;          // px, window centres
    std::vector<double> ys;
    std::vector<Vec2> displacement;  // px, NaN where masked
    std::vector<std::uint8_t> valid; // 0 where masked
    double mm_per_vector = 2.04;
    int step = 10;
    std::size_t outliers_replaced = 0;

    Vec2& at(std::size_t i, std::size_t j) { return displacement[j * nx + i]; }
    const Vec2& at(std::size_t i, std::size_t j) const { return displacement[j * nx + i]; }
    bool is_valid(std::size_t i, std::size_t j) const { return valid[j * nx + i] != 0; }
    double mm_per_px() const { return mm_per_vector / step; }
};

/// Coarse-to-fine correlation: each level correlates windows offset
/// symmetrically by the rounded displacement predicted from the previous
/// level, rejects outliers by the normalized median test and replaces them
/// with the neighbour median. Peaks are refined with a 3-point Gaussian
/// fit. Throws std::invalid_argument for mismatched or too-small images,
/// or when the mask covers every window.
DisplacementGrid piv_correlate(const FloatImage& a, const FloatImage& b, const PivParams& params = {});
DisplacementGrid piv_correlate(const GrayImage& a, const GrayImage& b, const PivParams& params = {});

/// Sub-pixel offset of a peak from its two neighbours; Gaussian fit with a
/// parabolic fallback when any value is not positive.
double subpixel_peak(double left, double center, double right);

/// CSV columns i,j,x_mm,y_mm,u,v,valid with u, v in px.
void write_displacement_csv(const std::filesystem::path& path, const DisplacementGrid& grid);

}  // namespace flatswim::flow
