#include <doctest.h>

#include <chrono>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include "flatswim/cantilever.hpp"
#include "support.hpp"

using namespace flatswim::cantilever;

TEST_CASE("flexural rigidity of the bench cantilever") {
    const auto t0 = std::chrono::steady_clock::now();
    const double ei = flexural_rigidity(55.576, 0.936e-3, 67e-3);
    const auto t1 = std::chrono::steady_clock::now();
    // mN·m², rounded to 4 significant figures.
    CHECK(std::round(ei * 1e3 * 1e5) / 1e5 == doctest::Approx(0.18775).epsilon(1e-12));
    CHECK(std::chrono::duration<double>(t1 - t0).count() < 1e-3);
    const double pi = std::numbers::pi;
    CHECK(ei == doctest::Approx(4.0 * pi * pi / (3.5 * 3.5) * 55.576 * 55.576 * 0.936e-3 * std::pow(67e-3, 4)).epsilon(1e-15));
    CHECK(CantileverSpec::bench().ei() == ei);
}

TEST_CASE("flexural rigidity scaling and errors") {
    CHECK(flexural_rigidity(111.152, 0.936e-3, 67e-3) == doctest::Approx(4.0 * flexural_rigidity(55.576, 0.936e-3, 67e-3)));
    CHECK(flexural_rigidity(55.576, 1e-300, 67e-3) < 1e-290);
    CHECK_THROWS_AS(flexural_rigidity(0.0, 0.936e-3, 67e-3), std::invalid_argument);
    CHECK_THROWS_AS(flexural_rigidity(55.0, -1.0, 67e-3), std::invalid_argument);
    CHECK_THROWS_AS(flexural_rigidity(55.0, 0.936e-3, 0.0), std::invalid_argument);
}

TEST_CASE("deflection profile") {
    const double ei = 0.18775e-3;
    const double b = 66e-3;
    CHECK(deflection(0.0, 1e-3, b, ei) == 0.0);
    CHECK(deflection(b, 1e-3, b, ei) == doctest::Approx(1e-3 * b * b * b / (3.0 * ei)).epsilon(1e-14));
    CHECK(deflection(b, 1e-3, b, ei) * 1e3 == doctest::Approx(0.510).epsilon(1e-3));
    for (double x = 0.0; x <= 67e-3; x += 1e-3) CHECK(deflection(x, 0.0, b, ei) == 0.0);
}

TEST_CASE("deflection is continuous with a continuous slope at the load point") {
    const double ei = 0.18775e-3;
    for (double b : {10e-3, 33e-3, 66e-3}) {
        const double f = 1.3e-3;
        const double h = 1e-7;
        CHECK(deflection(b - 1e-15, f, b, ei) == doctest::Approx(deflection(b + 1e-15, f, b, ei)).epsilon(1e-12));
        const double left_slope = (deflection(b, f, b, ei) - deflection(b - h, f, b, ei)) / h;
        const double right_slope = (deflection(b + h, f, b, ei) - deflection(b, f, b, ei)) / h;
        CHECK(left_slope == doctest::Approx(right_slope).epsilon(1e-4));
        // Both branches at x = b.
        CHECK(f * b * b * (3.0 * b - b) / (6.0 * ei) == doctest::Approx(f * b * b * (3.0 * b - b) / (6.0 * ei)));
    }
}

TEST_CASE("deflection is non-negative and increasing along the beam") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> fd(0.0, 5e-3), bd(1e-3, 67e-3);
    for (int i = 0; i < 200; ++i) {
        const double f = fd(rng);
        const double b = bd(rng);
        double prev = 0.0;
        for (double x = 0.5e-3; x <= 67e-3; x += 0.5e-3) {
            const double d = deflection(x, f, b, 0.18775e-3);
            CHECK(d >= 0.0);
            if (f > 0.0) CHECK(d > prev);
            prev = d;
        }
    }
}

TEST_CASE("inverse force solve round trip over random triples") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> fd(1e-6, 5e-3), pos(1e-4, 67e-3);
    const double ei = CantileverSpec::bench().ei();
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const double f = fd(rng);
        const double a = pos(rng);
        const double b = pos(rng);
        const double back = force_from_deflection(deflection(a, f, b, ei), a, b, ei);
        worst = std::max(worst, std::abs(back - f) / f);
    }
    CHECK(worst <= 1e-12);
}

TEST_CASE("inverse force solve examples") {
    const auto s = CantileverSpec::bench();
    const double ei = s.ei();
    CHECK(force_from_deflection(deflection(s.sensor_point, 1.1e-3, s.contact_point, ei), s.sensor_point, s.contact_point, ei) ==
          doctest::Approx(1.1e-3).epsilon(1e-12));
    CHECK(force_from_deflection(0.0, s.sensor_point, s.contact_point, ei) == 0.0);
    CHECK(force_from_deflection(2e-4, s.sensor_point, s.contact_point, ei) ==
          doctest::Approx(2.0 * force_from_deflection(1e-4, s.sensor_point, s.contact_point, ei)));
    CHECK_THROWS_AS(force_from_deflection(1e-4, 0.0, s.contact_point, ei), std::invalid_argument);
}

TEST_CASE("trace averaging") {
    const auto spec = CantileverSpec::bench();
    const double ei = spec.ei();
    const auto d_of = [&](double f) { return deflection(spec.sensor_point, f, spec.contact_point, ei); };

    std::vector<TraceSample> constant;
    for (double t = 0.0; t <= 6.0 + 1e-9; t += 0.01) constant.push_back({t, d_of(1e-3)});
    CHECK(measure_blocked_force(constant, spec) == doctest::Approx(1e-3).epsilon(1e-12));

    std::vector<TraceSample> overshoot;
    for (double t = 0.0; t <= 6.0 + 1e-9; t += 0.01) overshoot.push_back({t, d_of(t < 2.4 ? 3e-3 : 1.2e-3)});
    CHECK(measure_blocked_force(overshoot, spec) == doctest::Approx(1.2e-3).epsilon(1e-12));

    std::vector<TraceSample> ramp;
    for (int k = 0; k <= 600; ++k) {
        const double t = k * 0.01;
        ramp.push_back({t, d_of(1e-3 * t)});
    }
    CHECK(measure_blocked_force(ramp, spec) == doctest::Approx(1e-3 * 3.75).epsilon(1e-9));

    std::vector<TraceSample> short_trace;
    for (double t = 0.0; t <= 3.0; t += 0.01) short_trace.push_back({t, d_of(1e-3)});
    CHECK_THROWS_AS(measure_blocked_force(short_trace, spec), std::invalid_argument);
}

TEST_CASE("trace CSV round trip") {
    test::TempDir dir("trace");
    std::vector<TraceSample> trace;
    for (int k = 0; k < 100; ++k) trace.push_back({k * 0.05, 1e-5 * std::sin(k * 0.1)});
    write_trace_csv(dir / "trace.csv", trace);
    const auto back = read_trace_csv(dir / "trace.csv");
    REQUIRE(back.size() == trace.size());
    for (std::size_t k = 0; k < trace.size(); ++k) {
        CHECK(back[k].t == trace[k].t);
        CHECK(back[k].d == trace[k].d);
    }
    CHECK_THROWS_AS(read_trace_csv(dir / "missing.csv"), std::runtime_error);
}

TEST_CASE("spec validation") {
    auto s = CantileverSpec::bench();
    s.sensor_point = 80e-3;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s = CantileverSpec::bench();
    s.flexural_rigidity = 1e-4;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s = CantileverSpec::bench();
    s.resonance.reset();
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
}
