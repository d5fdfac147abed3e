#include "flatswim/flow/selftest.hpp"

#include <chrono>
#include <cmath>
#include <limits>

#include "flatswim/geometry.hpp"

namespace flatswim::flow {

Vec2 centred_displacement(const DisplacementFn& motion, Vec2 x) {
    Vec2 d = motion(x);
    for (int k = 0; k < 50; ++k) {
        const Vec2 next = motion(x - d * 0.5);
        if (norm(next - d) < 1e-13) return next;
        d = next;
    }
    return d;
}

double piv_rms_error(const DisplacementGrid& grid, const DisplacementFn& motion) {
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t j = 0; j < grid.ny; ++j)
        for (std::size_t i = 0; i < grid.nx; ++i) {
            if (!grid.is_valid(i, j)) continue;
            const Vec2 e = grid.at(i, j) - centred_displacement(motion, {grid.xs[i], grid.ys[j]});
            sum += dot(e, e);
            ++n;
        }
    return n == 0 ? std::numeric_limits<double>::infinity() : std::sqrt(sum / static_cast<double>(n));
}

std::vector<PivCase> piv_selftest(std::uint64_t seed, const ParticleParams& particles, const PivParams& piv) {
    const Vec2 centre{0.5 * static_cast<double>(particles.width - 1), 0.5 * static_cast<double>(particles.height - 1)};
    const double angle = deg_to_rad(0.5);
    struct Spec {
        std::string name;
        DisplacementFn motion;
        double tolerance;
    };
    const std::vector<Spec> specs = {
        {"uniform-shift", [](Vec2) { return Vec2{3.0, -2.0}; }, 0.1},
        {"identity", [](Vec2) { return Vec2{}; }, 0.01},
        {"rotation-0.5deg", [=](Vec2 p) { return rotate(p - centre, angle) - (p - centre); }, 0.15},
    };
    std::vector<PivCase> out;
    for (const auto& s : specs) {
        const auto pair = synth_particles(s.motion, seed, particles);
        const auto t0 = std::chrono::steady_clock::now();
        const auto grid = piv_correlate(pair.a, pair.b, piv);
        const auto t1 = std::chrono::steady_clock::now();
        PivCase c;
        c.name = s.name;
        c.tolerance = s.tolerance;
        c.rms_error = piv_rms_error(grid, s.motion);
        c.seconds = std::chrono::duration<double>(t1 - t0).count();
        c.vectors = grid.nx * grid.ny;
        c.pass = c.rms_error <= c.tolerance;
        out.push_back(std::move(c));
    }
    return out;
}

}  // namespace flatswim::flow
