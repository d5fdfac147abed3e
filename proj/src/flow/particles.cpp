#include "flatswim/flow/particles.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace flatswim::flow {

void ParticleParams::validate() const {
    if (width == 0 || height == 0) throw std::invalid_argument("particles: image must be non-empty");
    if (!(density > 0.0)) throw std::invalid_argument("particles: density must be > 0");
    if (!(diameter > 0.0)) throw std::invalid_argument("particles: diameter must be > 0");
    if (!(peak_min > 0.0 && peak_max >= peak_min)) throw std::invalid_argument("particles: invalid peak range");
    if (!(px_per_m > 0.0)) throw std::invalid_argument("particles: px_per_m must be > 0");
}

namespace {

void splat(FloatImage& img, Vec2 c, double peak, double diameter) {
    const double k = 8.0 / (diameter * diameter);
    const int r = static_cast<int>(std::ceil(diameter * 1.5));
    const int cx = static_cast<int>(std::lround(c.x));
    const int cy = static_cast<int>(std::lround(c.y));
    for (int y = cy - r; y <= cy + r; ++y) {
        if (y < 0 || y >= static_cast<int>(img.height)) continue;
        for (int x = cx - r; x <= cx + r; ++x) {
            if (x < 0 || x >= static_cast<int>(img.width)) continue;
            const double dx = x - c.x;
            const double dy = y - c.y;
            img.at(static_cast<std::size_t>(x), static_cast<std::size_t>(y)) +=
                static_cast<float>(peak * std::exp(-k * (dx * dx + dy * dy)));
        }
    }
}

}  // namespace

ParticlePair synth_particles(const DisplacementFn& displacement, std::uint64_t seed, const ParticleParams& params) {
    params.validate();
    // Seed particles over a margin so flow carries some in from outside.
    const double margin = 16.0;
    const double w = static_cast<double>(params.width) + 2.0 * margin;
    const double h = static_cast<double>(params.height) + 2.0 * margin;
    const auto count = static_cast<std::size_t>(std::llround(params.density * w * h));

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ux(-margin, static_cast<double>(params.width) + margin);
    std::uniform_real_distribution<double> uy(-margin, static_cast<double>(params.height) + margin);
    std::uniform_real_distribution<double> up(params.peak_min, params.peak_max);

    ParticlePair out;
    FloatImage fa(params.width, params.height);
    FloatImage fb(params.width, params.height);
    out.positions_a.reserve(count);
    out.positions_b.reserve(count);
    for (std::size_t n = 0; n < count; ++n) {
        const Vec2 p{ux(rng), uy(rng)};
        const double peak = up(rng);
        const Vec2 q = p + displacement(p);
        out.positions_a.push_back(p);
        out.positions_b.push_back(q);
        splat(fa, p, peak, params.diameter);
        splat(fb, q, peak, params.diameter);
    }
    out.a = to_gray(fa);
    out.b = to_gray(fb);
    return out;
}

ParticlePair synth_particles(const FlowField& field, double dt, std::uint64_t seed, const ParticleParams& params) {
    field.validate();
    const double s = params.px_per_m;
    const double gi_max = static_cast<double>(field.nx() - 1);
    const double gj_max = static_cast<double>(field.ny() - 1);
    // Particles beyond the grid take the nearest edge velocity.
    return synth_particles(
        [&](Vec2 px) {
            const Vec2 g = px / (s * field.spacing());
            return field.sample_grid(std::clamp(g.x, 0.0, gi_max), std::clamp(g.y, 0.0, gj_max)) * (dt * s);
        },
        seed, params);
}

}  // namespace flatswim::flow
