#include "flatswim/flow/lic.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>
#include <mutex>
#include <numbers>
#include <random>
#include <stdexcept>

#include "flatswim/parallel.hpp"

namespace flatswim::flow {

void LicParams::validate() const {
    if (kernel_length < 3) throw std::invalid_argument("lic: kernel_length must be >= 3");
    if (passes < 1) throw std::invalid_argument("lic: passes must be >= 1");
    if (!(step > 0.0)) throw std::invalid_argument("lic: step must be > 0");
}

namespace {

std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

}  // namespace

FloatImage pink_noise(std::size_t width, std::size_t height, std::uint64_t seed) {
    if (width == 0 || height == 0) throw std::invalid_argument("pink_noise: empty image");
    // Random phases and unit-variance complex amplitudes, shaped by |k|^-1/2.
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    const std::size_t hw = width / 2 + 1;
    auto* spec = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * height * hw));
    auto* real = static_cast<double*>(fftw_malloc(sizeof(double) * height * width));
    std::unique_ptr<void, void (*)(void*)> guard_spec(spec, fftw_free);
    std::unique_ptr<void, void (*)(void*)> guard_real(real, fftw_free);
    for (std::size_t y = 0; y < height; ++y) {
        const double ky = static_cast<double>(y <= height / 2 ? y : height - y) / static_cast<double>(height);
        for (std::size_t x = 0; x < hw; ++x) {
            const double kx = static_cast<double>(x) / static_cast<double>(width);
            const double k = std::hypot(kx, ky);
            const double a = normal(rng);
            const double b = normal(rng);
            const double amp = k > 0.0 ? 1.0 / std::sqrt(k) : 0.0;
            spec[y * hw + x][0] = a * amp;
            spec[y * hw + x][1] = b * amp;
        }
    }
    fftw_plan plan;
    {
        std::lock_guard lock(planner_mutex());
        plan = fftw_plan_dft_c2r_2d(static_cast<int>(height), static_cast<int>(width), spec, real, FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(plan);
    }
    FloatImage out(width, height);
    for (std::size_t i = 0; i < width * height; ++i) out.data[i] = static_cast<float>(real[i]);
    normalize_contrast(out);
    return out;
}

void normalize_contrast(FloatImage& img) {
    if (img.data.empty()) return;
    double sum = 0.0;
    for (float v : img.data) sum += v;
    const double mean = sum / static_cast<double>(img.data.size());
    double var = 0.0;
    for (float v : img.data) var += (v - mean) * (v - mean);
    const double sd = std::sqrt(var / static_cast<double>(img.data.size()));
    const double scale = sd > 0.0 ? kNoiseStd / sd : 0.0;
    for (float& v : img.data) v = static_cast<float>((v - mean) * scale);
}

GrayImage texture_to_gray(const FloatImage& img) {
    GrayImage out(img.width, img.height);
    for (std::size_t i = 0; i < img.data.size(); ++i) {
        const double v = std::clamp(0.5 + static_cast<double>(img.data[i]), 0.0, 1.0);
        out.data[i] = static_cast<std::uint8_t>(std::lround(v * 255.0));
    }
    return out;
}

namespace {

// Bilinear texture lookup with edge clamping, in pixel coordinates.
float sample_texture(const FloatImage& img, double x, double y) {
    x = std::clamp(x, 0.0, static_cast<double>(img.width - 1));
    y = std::clamp(y, 0.0, static_cast<double>(img.height - 1));
    const auto x0 = std::min(static_cast<std::size_t>(x), img.width > 1 ? img.width - 2 : 0);
    const auto y0 = std::min(static_cast<std::size_t>(y), img.height > 1 ? img.height - 2 : 0);
    const std::size_t x1 = img.width > 1 ? x0 + 1 : x0;
    const std::size_t y1 = img.height > 1 ? y0 + 1 : y0;
    const double tx = x - static_cast<double>(x0);
    const double ty = y - static_cast<double>(y0);
    const double a = img.at(x0, y0) * (1.0 - tx) + img.at(x1, y0) * tx;
    const double b = img.at(x0, y1) * (1.0 - tx) + img.at(x1, y1) * tx;
    return static_cast<float>(a * (1.0 - ty) + b * ty);
}

struct DirectionField {
    const FlowField& field;

    // Unit flow direction in pixel coordinates (row 0 at the top), or zero.
    Vec2 at(double px, double py) const {
        const double gj = static_cast<double>(field.ny() - 1) - py;
        const Vec2 v = field.sample_grid(px, gj);
        const double n = norm(v);
        if (!(n > 0.0)) return {};
        return {v.x / n, -v.y / n};
    }
};

}  // namespace

GrayImage lic_render(const FlowField& field, std::uint64_t seed, const LicParams& params) {
    params.validate();
    field.validate();
    const std::size_t w = field.nx();
    const std::size_t h = field.ny();
    const DirectionField dir{field};
    const int steps = std::max(1, static_cast<int>(std::lround(0.5 * params.kernel_length / params.step)));

    FloatImage tex = pink_noise(w, h, seed);
    for (int pass = 0; pass < params.passes; ++pass) {
        FloatImage next(w, h);
        parallel_for(h, params.workers, [&](std::size_t y, unsigned) {
            for (std::size_t x = 0; x < w; ++x) {
                const double x0 = static_cast<double>(x);
                const double y0 = static_cast<double>(y);
                double sum = tex.at(x, y);
                int count = 1;
                for (double sign : {1.0, -1.0}) {
                    double px = x0;
                    double py = y0;
                    for (int s = 0; s < steps; ++s) {
                        const Vec2 d1 = dir.at(px, py);
                        if (d1.x == 0.0 && d1.y == 0.0) break;
                        const double hs = sign * params.step;
                        const Vec2 d2 = dir.at(px + 0.5 * hs * d1.x, py + 0.5 * hs * d1.y);
                        if (d2.x == 0.0 && d2.y == 0.0) break;
                        px += hs * d2.x;
                        py += hs * d2.y;
                        if (px < 0.0 || py < 0.0 || px > static_cast<double>(w - 1) || py > static_cast<double>(h - 1))
                            break;
                        sum += sample_texture(tex, px, py);
                        ++count;
                    }
                }
                next.at(x, y) = static_cast<float>(sum / count);
            }
        });
        normalize_contrast(next);
        tex = std::move(next);
    }
    return texture_to_gray(tex);
}

}  // namespace flatswim::flow
