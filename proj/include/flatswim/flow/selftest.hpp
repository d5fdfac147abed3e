#pragma once

// PIV accuracy checks on synthetic particle pairs with known motion.

#include <cstdint>
#include <string>
#include <vector>

#include "flatswim/flow/particles.hpp"
#include "flatswim/flow/piv.hpp"

namespace flatswim::flow {

struct PivCase {
    std::string name;
    double rms_error = 0.0;  // px, over valid vectors
    double tolerance = 0.0;  // px
    double seconds = 0.0;    // wall time of the correlation
    std::size_t vectors = 0;
    bool pass = false;
};

/// Displacement recorded at window centre x for motion D: the d with
/// (x − d/2) + D(x − d/2) = x + d/2, by fixed-point iteration.
Vec2 centred_displacement(const DisplacementFn& motion, Vec2 x);

/// RMS of the PIV error against the centred displacement of `motion`.
double piv_rms_error(const DisplacementGrid& grid, const DisplacementFn& motion);

/// Uniform (3, −2) px shift, identity pair and 0.5° solid-body rotation
/// about the image centre.
std::vector<PivCase> piv_selftest(std::uint64_t seed = 1, const ParticleParams& particles = {},
                                  const PivParams& piv = {});

}  // namespace flatswim::flow
