#include <doctest.h>

#include <cmath>
#include <fstream>
#include <stdexcept>
#include <string>

#include "flatswim/flow/particles.hpp"
#include "flatswim/flow/piv.hpp"
#include "flatswim/flow/selftest.hpp"
#include "support.hpp"

using namespace flatswim;
using namespace flatswim::flow;

namespace {

ParticleParams small_images() {
    ParticleParams p;
    p.width = 256;
    p.height = 256;
    return p;
}

PivParams fast_piv() {
    PivParams p;
    p.final_window = 32;
    p.step = 16;
    p.levels = 2;
    return p;
}

Vec2 mean_valid(const DisplacementGrid& g) {
    Vec2 sum;
    std::size_t n = 0;
    for (std::size_t j = 0; j < g.ny; ++j)
        for (std::size_t i = 0; i < g.nx; ++i)
            if (g.is_valid(i, j)) {
                sum += g.at(i, j);
                ++n;
            }
    return sum / static_cast<double>(n);
}

}  // namespace

TEST_CASE("sub-pixel peak fit") {
    CHECK(subpixel_peak(1.0, 2.0, 1.0) == 0.0);
    for (double delta : {-0.4, -0.1, 0.25, 0.45}) {
        const auto g = [&](double x) { return std::exp(-(x - delta) * (x - delta)); };
        CHECK(subpixel_peak(g(-1.0), g(0.0), g(1.0)) == doctest::Approx(delta).epsilon(1e-9));
    }
    const double parabolic = subpixel_peak(0.0, 1.0, 0.5);
    CHECK(parabolic > 0.0);
    CHECK(parabolic < 0.5);
}

TEST_CASE("synthetic particles") {
    const auto p = small_images();
    const auto still = synth_particles([](Vec2) { return Vec2{}; }, 3, p);
    CHECK(still.a == still.b);
    CHECK(still.a.width == 256);
    CHECK(still.positions_a.size() == still.positions_b.size());
    const auto again = synth_particles([](Vec2) { return Vec2{}; }, 3, p);
    CHECK(again.a == still.a);
    const auto moved = synth_particles([](Vec2) { return Vec2{2.0, 0.0}; }, 3, p);
    CHECK(moved.positions_b[0].x == doctest::Approx(moved.positions_a[0].x + 2.0));

    const auto zero = uniform_field(10, 10, 1e-3, {0.0, 0.0});
    const auto fpair = synth_particles(zero, 0.01, 3, p);
    CHECK(fpair.a == fpair.b);
    ParticleParams bad = p;
    bad.density = 0.0;
    CHECK_THROWS_AS(synth_particles([](Vec2) { return Vec2{}; }, 1, bad), std::invalid_argument);
}

TEST_CASE("uniform shift on small frames") {
    const auto pair = synth_particles([](Vec2) { return Vec2{3.0, 0.0}; }, 5, small_images());
    const auto g = piv_correlate(pair.a, pair.b, fast_piv());
    REQUIRE(g.nx > 0);
    const Vec2 m = mean_valid(g);
    CHECK(m.x == doctest::Approx(3.0).epsilon(0.02));
    CHECK(std::abs(m.y) < 0.05);
    CHECK(piv_rms_error(g, [](Vec2) { return Vec2{3.0, 0.0}; }) < 0.1);
}

TEST_CASE("identical frames give zero displacement") {
    const auto pair = synth_particles([](Vec2) { return Vec2{}; }, 6, small_images());
    const auto g = piv_correlate(pair.a, pair.a, fast_piv());
    CHECK(piv_rms_error(g, [](Vec2) { return Vec2{}; }) < 0.01);
}

TEST_CASE("shifting both frames leaves the displacement unchanged") {
    const auto pair = synth_particles([](Vec2) { return Vec2{1.5, -2.5}; }, 8, small_images());
    const auto g = piv_correlate(pair.a, pair.b, fast_piv());
    const auto h = piv_correlate(shifted(pair.a, 32, 32), shifted(pair.b, 32, 32), fast_piv());
    REQUIRE(g.nx == h.nx);
    // Node (i, j) of the moved pair sees what node (i - 2, j - 2) saw.
    for (std::size_t j = 4; j + 2 < g.ny; ++j)
        for (std::size_t i = 4; i + 2 < g.nx; ++i) {
            CHECK(std::abs(h.at(i, j).x - g.at(i - 2, j - 2).x) < 1e-3);
            CHECK(std::abs(h.at(i, j).y - g.at(i - 2, j - 2).y) < 1e-3);
        }
}

TEST_CASE("masked windows") {
    const auto pair = synth_particles([](Vec2) { return Vec2{2.0, 1.0}; }, 9, small_images());
    auto p = fast_piv();
    p.mask = PixelRect{100.0, 100.0, 160.0, 160.0};
    const auto g = piv_correlate(pair.a, pair.b, p);
    std::size_t masked = 0;
    for (std::size_t j = 0; j < g.ny; ++j)
        for (std::size_t i = 0; i < g.nx; ++i) {
            const bool inside = p.mask->contains(g.xs[i], g.ys[j]);
            CHECK(g.is_valid(i, j) == !inside);
            if (inside) {
                ++masked;
                CHECK(std::isnan(g.at(i, j).x));
                CHECK(std::isnan(g.at(i, j).y));
            }
        }
    CHECK(masked > 0);
    CHECK(piv_rms_error(g, [](Vec2) { return Vec2{2.0, 1.0}; }) < 0.1);

    p.mask = PixelRect{-1.0, -1.0, 1e4, 1e4};
    CHECK_THROWS_AS(piv_correlate(pair.a, pair.b, p), std::invalid_argument);
}

TEST_CASE("input validation") {
    const GrayImage small(16, 16);
    CHECK_THROWS_AS(piv_correlate(small, small, fast_piv()), std::invalid_argument);
    const GrayImage a(64, 64);
    const GrayImage b(64, 65);
    CHECK_THROWS_AS(piv_correlate(a, b, fast_piv()), std::invalid_argument);
    auto p = fast_piv();
    p.step = 0;
    CHECK_THROWS_AS(piv_correlate(a, a, p), std::invalid_argument);
}

TEST_CASE("displacement CSV") {
    test::TempDir dir("piv");
    const auto pair = synth_particles([](Vec2) { return Vec2{2.0, 1.0}; }, 9, small_images());
    auto p = fast_piv();
    p.mask = PixelRect{100.0, 100.0, 160.0, 160.0};
    const auto g = piv_correlate(pair.a, pair.b, p);
    write_displacement_csv(dir / "d.csv", g);
    std::ifstream in(dir / "d.csv");
    std::string line;
    std::getline(in, line);
    CHECK(line == "i,j,x_mm,y_mm,u,v,valid");
    std::size_t rows = 0;
    std::size_t nan_rows = 0;
    while (std::getline(in, line)) {
        ++rows;
        if (line.find("nan,nan,0") != std::string::npos) ++nan_rows;
    }
    CHECK(rows == g.nx * g.ny);
    CHECK(nan_rows > 0);
}

TEST_CASE("centred displacement") {
    const auto uniform = [](Vec2) { return Vec2{3.0, -2.0}; };
    CHECK(centred_displacement(uniform, {10.0, 10.0}) == Vec2{3.0, -2.0});
    // Linear stretch d = 0.1·x: d = 0.1·(x - d/2) gives d = x·0.1/1.05.
    const auto stretch = [](Vec2 p) { return Vec2{0.1 * p.x, 0.0}; };
    CHECK(centred_displacement(stretch, {100.0, 0.0}).x == doctest::Approx(10.0 / 1.05).epsilon(1e-12));
}

TEST_CASE("full-size self test") {
    const auto cases = piv_selftest(1);
    REQUIRE(cases.size() == 3);
    for (const auto& c : cases) {
        CAPTURE(c.name);
        CAPTURE(c.rms_error);
        CHECK(c.pass);
        CHECK(c.vectors > 0);
    }
}
