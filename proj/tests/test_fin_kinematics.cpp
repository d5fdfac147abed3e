#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "flatswim/fin_kinematics.hpp"

using namespace flatswim::fin;

TEST_CASE("kappa from a wave count") {
    const double L = 45e-3;
    CHECK(kappa_from_wave_count(L, 16.0, 1.5) == doctest::Approx(L * 16.0 / 1.5).epsilon(1e-15));
    FinWaveSpec spec = FinWaveSpec::defaults();
    spec.wavelength_constant = kappa_from_wave_count(spec.fin_length, 16.0, 1.5);
    CHECK(wave_count(spec, 16.0) == doctest::Approx(1.5).epsilon(1e-14));
    CHECK(wave_count(spec, 32.0) == doctest::Approx(3.0).epsilon(1e-14));
}

TEST_CASE("wavelength is inverse in frequency") {
    const auto spec = FinWaveSpec::defaults();
    CHECK(wavelength_at(spec, 40.0) == doctest::Approx(0.5 * wavelength_at(spec, 20.0)));
    for (double f = 1.0; f < 100.0; f += 3.7) CHECK(wavelength_at(spec, f) * f == doctest::Approx(spec.wavelength_constant));
    CHECK_THROWS_AS(wavelength_at(spec, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(wavelength_at(spec, -5.0), std::invalid_argument);
}

TEST_CASE("default fin carries more than 1.5 waves from the anchor frequency up") {
    const auto spec = FinWaveSpec::defaults();
    CHECK(wave_count(spec, kAnchorFrequency) == doctest::Approx(kAnchorWaveCount));
    for (double f = kAnchorFrequency; f <= 100.0; f += 0.5) CHECK(wave_count(spec, f) > 1.5);
}

TEST_CASE("amplitude interpolation is monotone and clamped") {
    const auto spec = FinWaveSpec::defaults();
    const auto& t = spec.amplitude_table;
    REQUIRE(t.size() >= 2);
    CHECK(peak_to_peak_at(spec, t.front().f_act - 10.0) == t.front().peak_to_peak);
    CHECK(peak_to_peak_at(spec, t.back().f_act + 10.0) == t.back().peak_to_peak);
    for (std::size_t k = 0; k + 1 < t.size(); ++k) {
        const double lo = std::min(t[k].peak_to_peak, t[k + 1].peak_to_peak);
        const double hi = std::max(t[k].peak_to_peak, t[k + 1].peak_to_peak);
        double prev = t[k].peak_to_peak;
        for (int s = 1; s <= 20; ++s) {
            const double f = t[k].f_act + (t[k + 1].f_act - t[k].f_act) * s / 20.0;
            const double a = peak_to_peak_at(spec, f);
            CHECK(a >= lo - 1e-15);
            CHECK(a <= hi + 1e-15);
            if (t[k + 1].peak_to_peak <= t[k].peak_to_peak) CHECK(a <= prev + 1e-15);
            else CHECK(a >= prev - 1e-15);
            prev = a;
        }
    }
}

TEST_CASE("profile has a clamped root") {
    const auto spec = FinWaveSpec::defaults();
    for (int k = 0; k < 5; ++k) CHECK(fin_height(spec, 20.0, k / 20.0, 0.0) == 0.0);
    const auto p = fin_profile(spec, 20.0, 0.0, 11);
    REQUIRE(p.size() == 11);
    CHECK(p.front().x == 0.0);
    CHECK(p.back().x == doctest::Approx(spec.fin_length));
    CHECK(p.front().z == 0.0);
    CHECK_THROWS_AS(fin_profile(spec, 20.0, 0.0, 1), std::invalid_argument);
}

TEST_CASE("traveling wave shift") {
    const auto spec = FinWaveSpec::defaults();
    const double f = 20.0;
    const double lambda = wavelength_at(spec, f);
    const double delta = 1e-3;
    const double shift = lambda * f * delta;
    for (double x = 0.25 * spec.fin_length; x <= spec.fin_length; x += 1e-3) {
        if (x - shift < 0.2 * spec.fin_length) continue;
        CHECK(fin_height(spec, f, 0.013 + delta, x) == doctest::Approx(fin_height(spec, f, 0.013, x - shift)).epsilon(1e-9));
        CHECK(std::abs(fin_height(spec, f, 0.013 + delta, x) - fin_height(spec, f, 0.013, x - shift)) < 1e-9);
    }
}

TEST_CASE("fin height stays within half the peak-to-peak amplitude") {
    const auto spec = FinWaveSpec::defaults();
    for (double f : {5.0, 16.0, 30.0, 40.0}) {
        const double half = 0.5 * peak_to_peak_at(spec, f);
        for (int k = 0; k < 50; ++k)
            for (const auto& pt : fin_profile(spec, f, k / (50.0 * f), 64)) CHECK(std::abs(pt.z) <= half + 1e-15);
    }
}

TEST_CASE("envelope rises from zero to one") {
    const double L = 45e-3;
    CHECK(envelope(0.0, L) == 0.0);
    CHECK(envelope(0.2 * L, L) == doctest::Approx(1.0));
    CHECK(envelope(L, L) == 1.0);
    double prev = 0.0;
    for (int k = 1; k <= 100; ++k) {
        const double e = envelope(L * k / 100.0, L);
        CHECK(e >= prev);
        prev = e;
    }
}

TEST_CASE("invalid specs are rejected") {
    auto spec = FinWaveSpec::defaults();
    spec.wavelength_constant = 0.0;
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
    spec = FinWaveSpec::defaults();
    spec.amplitude_table = {{10.0, 1e-3}, {10.0, 2e-3}};
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
}
