#pragma once

// Synthetic particle image pairs for PIV checks.

#include <cstdint>
#include <functional>
#include <vector>

#include "flatswim/flow/field.hpp"
#include "flatswim/flow/image.hpp"

namespace flatswim::flow {

struct ParticleParams {
    std::size_t width = 1024;
    std::size_t height = 1024;
    double density = 0.02;       // particles per px²
    double diameter = 2.5;       // px, e^-2 diameter of the Gaussian blob
    double peak_min = 150.0;     // gray levels
    double peak_max = 250.0;
    double px_per_m = 5000.0;    // image scale used with a FlowField

    void validate() const;
};

struct ParticlePair {
    GrayImage a;
    GrayImage b;
    std::vector<Vec2> positions_a;  // px, particle centers
    std::vector<Vec2> positions_b;
};

/// Displacement in px as a function of the frame-A position in px.
using DisplacementFn = std::function<Vec2(Vec2)>;

ParticlePair synth_particles(const DisplacementFn& displacement, std::uint64_t seed, const ParticleParams& params = {});

/// Pixel (px, py) sits (px, py)/px_per_m from the field origin, and each
/// particle moves by field·dt·px_per_m. Particles beyond the grid use the
/// nearest edge velocity.
ParticlePair synth_particles(const FlowField& field, double dt, std::uint64_t seed, const ParticleParams& params = {});

}  // namespace flatswim::flow
