#pragma once

// Parametric surface wake behind the swimmer and its metrics.

#include "flatswim/flow/field.hpp"

namespace flatswim::flow {

enum class WakeMode { Forward, Turning };

/// Robot at the origin heading +x. Two counter-rotating Lamb–Oseen vortices
/// sit behind the body at (vortex_x, ±vortex_y) and a Gaussian rearward jet
/// runs along the centerline.
struct WakeParams {
    double vortex_x = -0.035;       // m
    double vortex_y = 0.02;         // m
    double circulation = 4e-4;      // m²/s, magnitude per vortex
    double core_radius = 6e-3;      // m
    double jet_speed_ratio = 3.0;   // jet peak / robot speed
    double jet_x = -0.04;           // m, jet peak location
    double jet_length = 0.025;      // m, streamwise Gaussian sigma
    double jet_sigma = 8e-3;        // m, lateral Gaussian sigma
    double asymmetry = 0.4;         // turning mode: factor on the +y vortex
    std::size_t nx = 201;
    std::size_t ny = 121;
    double spacing = 1e-3;          // m
    double x_min = -0.15;           // m

    void validate() const;
};

/// Lamb–Oseen azimuthal speed at radius r.
double lamb_oseen_speed(double r, double circulation, double core_radius);

/// Exact field value at a point; the grid synthesis samples this.
Vec2 wake_velocity(Vec2 p, double robot_speed, WakeMode mode, const WakeParams& params);

/// Samples the wake on a grid whose rows are placed symmetrically about
/// y = 0, so forward mode is mirror-symmetric node for node.
FlowField synthesize_wake(double robot_speed, WakeMode mode, const WakeParams& params = {});

struct WakeMetrics {
    double u_prop = 0.0;         // m/s, peak rearward speed minus robot speed
    double wake_width = 0.0;     // m
    double peak_rearward = 0.0;  // m/s
    bool flagged = false;        // no rearward flow found
};

/// Peak rearward (−x) velocity over the field, the robot speed subtracted
/// from it, and the lateral extent through the peak where the rearward
/// component stays at or above `threshold` × peak, interpolated linearly.
WakeMetrics wake_metrics(const FlowField& field, double robot_speed, double threshold = 0.5);

}  // namespace flatswim::flow
