#pragma once

// Line integral convolution of a pink-noise texture along a flow field.

#include <cstdint>

#include "flatswim/flow/field.hpp"
#include "flatswim/flow/image.hpp"

namespace flatswim::flow {

inline constexpr double kNoiseStd = 0.15;

struct LicParams {
    int kernel_length = 15;  // px, full box length per pass
    int passes = 2;
    double step = 0.5;       // px, streamline integration step
    unsigned workers = 1;    // 0 = hardware concurrency

    void validate() const;
};

/// Zero-mean noise with power falling as 1/|k| and standard deviation
/// kNoiseStd, deterministic per seed.
FloatImage pink_noise(std::size_t width, std::size_t height, std::uint64_t seed);

/// Shifts to mean 0 and scales to standard deviation kNoiseStd.
void normalize_contrast(FloatImage& img);

/// Maps a zero-mean texture to 8 bits as clamp(0.5 + v, 0, 1)·255.
GrayImage texture_to_gray(const FloatImage& img);

/// One image pixel per field node, +y up. Each pass box-filters the
/// current texture along the streamline through every pixel, traced both
/// ways with midpoint steps of the unit flow direction and bilinear
/// sampling, then restores the contrast. A pixel where the flow vanishes
/// keeps its own value.
GrayImage lic_render(const FlowField& field, std::uint64_t seed, const LicParams& params = {});

}  // namespace flatswim::flow
