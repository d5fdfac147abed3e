#include "flatswim/flow/wake.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace flatswim::flow {

void WakeParams::validate() const {
    if (!(core_radius > 0.0) || !(jet_length > 0.0) || !(jet_sigma > 0.0) || !(spacing > 0.0))
        throw std::invalid_argument("wake params: core radius, jet scales and spacing must be > 0");
    if (circulation < 0.0 || jet_speed_ratio < 0.0 || asymmetry < 0.0)
        throw std::invalid_argument("wake params: circulation, jet ratio and asymmetry must be >= 0");
    if (nx < 2 || ny < 2) throw std::invalid_argument("wake params: grid needs at least 2×2 nodes");
}

double lamb_oseen_speed(double r, double circulation, double core_radius) {
    if (r == 0.0) return 0.0;
    return circulation / (2.0 * std::numbers::pi * r) * (1.0 - std::exp(-(r * r) / (core_radius * core_radius)));
}

namespace {

// Velocity induced at offset d from a core with signed circulation g.
Vec2 vortex_velocity(Vec2 d, double g, double rc) {
    const double r2 = d.x * d.x + d.y * d.y;
    if (r2 == 0.0) return {};
    const double k = g / (2.0 * std::numbers::pi * r2) * (1.0 - std::exp(-r2 / (rc * rc)));
    return {-d.y * k, d.x * k};
}

}  // namespace

Vec2 wake_velocity(Vec2 p, double robot_speed, WakeMode mode, const WakeParams& w) {
    const double upper_gain = mode == WakeMode::Turning ? w.asymmetry : 1.0;
    // Clockwise above the centerline and counter-clockwise below, both
    // pushing water rearward between them.
    const Vec2 upper = vortex_velocity({p.x - w.vortex_x, p.y - w.vortex_y}, -w.circulation * upper_gain,
                                       w.core_radius);
    const Vec2 lower = vortex_velocity({p.x - w.vortex_x, p.y + w.vortex_y}, w.circulation, w.core_radius);
    const double ex = (p.x - w.jet_x) / w.jet_length;
    const double ey = p.y / w.jet_sigma;
    const double jet = -w.jet_speed_ratio * robot_speed * std::exp(-0.5 * (ex * ex + ey * ey));
    return {(upper.x + lower.x) + jet, upper.y + lower.y};
}

FlowField synthesize_wake(double robot_speed, WakeMode mode, const WakeParams& params) {
    params.validate();
    const double c = 0.5 * static_cast<double>(params.ny - 1);
    FlowField field(params.nx, params.ny, params.spacing, {params.x_min, -c * params.spacing});
    for (std::size_t j = 0; j < params.ny; ++j) {
        const double y = (static_cast<double>(j) - c) * params.spacing;
        for (std::size_t i = 0; i < params.nx; ++i) {
            const double x = params.x_min + static_cast<double>(i) * params.spacing;
            field.at(i, j) = wake_velocity({x, y}, robot_speed, mode, params);
        }
    }
    return field;
}

WakeMetrics wake_metrics(const FlowField& field, double robot_speed, double threshold) {
    field.validate();
    if (!(threshold > 0.0 && threshold <= 1.0)) throw std::invalid_argument("wake_metrics: threshold must be in (0, 1]");

    std::size_t pi = 0;
    std::size_t pj = 0;
    double peak = 0.0;
    for (std::size_t j = 0; j < field.ny(); ++j)
        for (std::size_t i = 0; i < field.nx(); ++i)
            if (-field.at(i, j).x > peak) {
                peak = -field.at(i, j).x;
                pi = i;
                pj = j;
            }

    WakeMetrics m;
    if (!(peak > 0.0)) {
        m.u_prop = -robot_speed;
        m.flagged = true;
        return m;
    }
    m.peak_rearward = peak;
    m.u_prop = peak - robot_speed;

    // Walk outward along the peak column until the rearward speed drops below the level.
    const double level = threshold * peak;
    const auto rear = [&](std::size_t j) { return -field.at(pi, j).x; };
    double lo = static_cast<double>(pj);
    for (std::size_t j = pj; j > 0; --j) {
        if (rear(j - 1) < level) {
            lo = static_cast<double>(j) - (rear(j) - level) / (rear(j) - rear(j - 1));
            break;
        }
        lo = static_cast<double>(j - 1);
    }
    double hi = static_cast<double>(pj);
    for (std::size_t j = pj; j + 1 < field.ny(); ++j) {
        if (rear(j + 1) < level) {
            hi = static_cast<double>(j) + (rear(j) - level) / (rear(j) - rear(j + 1));
            break;
        }
        hi = static_cast<double>(j + 1);
    }
    m.wake_width = (hi - lo) * field.spacing();
    return m;
}

}  // namespace flatswim::flow
