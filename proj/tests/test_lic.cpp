#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <vector>

#include "flatswim/flow/lic.hpp"
#include "flatswim/flow/wake.hpp"
#include "image_stats.hpp"

using namespace flatswim;
using namespace flatswim::flow;

namespace {

double gray_std(const GrayImage& img) {
    double sum = 0.0;
    for (auto v : img.data) sum += v;
    const double mean = sum / static_cast<double>(img.data.size());
    double var = 0.0;
    for (auto v : img.data) var += (v - mean) * (v - mean);
    return std::sqrt(var / static_cast<double>(img.data.size()));
}

}  // namespace

TEST_CASE("pink noise statistics") {
    const auto a = pink_noise(128, 96, 5);
    double sum = 0.0;
    double sq = 0.0;
    for (float v : a.data) {
        sum += v;
        sq += static_cast<double>(v) * v;
    }
    const double n = static_cast<double>(a.data.size());
    CHECK(std::abs(sum / n) < 1e-6);
    CHECK(std::sqrt(sq / n) == doctest::Approx(kNoiseStd).epsilon(1e-4));
    CHECK(pink_noise(128, 96, 5) == a);
    CHECK_FALSE(pink_noise(128, 96, 6) == a);
    CHECK_THROWS_AS(pink_noise(0, 4, 1), std::invalid_argument);
}

TEST_CASE("LIC is deterministic per seed and worker count") {
    const auto field = synthesize_wake(0.12, WakeMode::Forward);
    LicParams p;
    const auto a = lic_render(field, 9, p);
    CHECK(lic_render(field, 9, p) == a);
    p.workers = 4;
    CHECK(lic_render(field, 9, p) == a);
    CHECK_FALSE(lic_render(field, 10, p) == a);
}

TEST_CASE("zero field leaves the noise in place") {
    const auto field = uniform_field(96, 64, 1e-3, {0.0, 0.0});
    const auto out = lic_render(field, 4);
    const auto ref = texture_to_gray(pink_noise(96, 64, 4));
    for (std::size_t i = 0; i < out.data.size(); ++i) CHECK(std::abs(int(out.data[i]) - int(ref.data[i])) <= 1);
}

TEST_CASE("uniform flow stretches the texture along the stream") {
    const auto horizontal = lic_render(uniform_field(200, 200, 1e-3, {1.0, 0.0}), 2);
    const double along_h = test::correlation_length(horizontal, 1, 0, 30);
    const double across_h = test::correlation_length(horizontal, 0, 1, 30);
    CAPTURE(along_h);
    CAPTURE(across_h);
    CHECK(along_h >= 3.0 * across_h);
    const auto vertical = lic_render(uniform_field(200, 200, 1e-3, {0.0, -0.4}), 2);
    const double along_v = test::correlation_length(vertical, 0, 1, 30);
    const double across_v = test::correlation_length(vertical, 1, 0, 30);
    CAPTURE(along_v);
    CAPTURE(across_v);
    CHECK(along_v >= 3.0 * across_v);
}

TEST_CASE("contrast is stable across seeds") {
    const auto field = synthesize_wake(0.12, WakeMode::Forward);
    std::vector<double> sds;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) sds.push_back(gray_std(lic_render(field, seed)));
    const double ref = kNoiseStd * 255.0;
    for (double s : sds) CHECK(s == doctest::Approx(ref).epsilon(0.10));
}

TEST_CASE("LIC parameter validation") {
    const auto field = uniform_field(16, 16, 1e-3, {1.0, 0.0});
    LicParams p;
    p.kernel_length = 2;
    CHECK_THROWS_AS(lic_render(field, 1, p), std::invalid_argument);
    p = {};
    p.passes = 0;
    CHECK_THROWS_AS(lic_render(field, 1, p), std::invalid_argument);
}
