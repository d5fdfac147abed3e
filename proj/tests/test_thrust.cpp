#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "flatswim/thrust.hpp"

using namespace flatswim::thrust;

namespace {

const ModuleDesign kPet{45, 20, 2, Variant::PET};
const ModuleDesign kPvdf{45, 20, 2, Variant::PVDF};

}  // namespace

TEST_CASE("measured blocked force anchors pass through exactly") {
    const auto& cal = ThrustCalibration::bundled();
    CHECK(blocked_force(cal, kPet, 40.0, 1500.0) == 1.1);
    CHECK(blocked_force(cal, kPet, 40.0, 1700.0) == 1.6);
    CHECK(blocked_force(cal, kPvdf, 30.0, 500.0) == 0.8);
    CHECK(blocked_force(cal, kPet, 40.0, 1200.0) == 0.0);
    CHECK(blocked_force(cal, kPvdf, 30.0, 400.0) == 0.0);
    CHECK(blocked_force(cal, kPet, 40.0, 900.0) == 0.0);
}

TEST_CASE("extrapolation above the last anchor continues the slope to 2 kV then clamps") {
    const auto& cal = ThrustCalibration::bundled();
    CHECK(blocked_force(cal, kPet, 40.0, 2000.0) == doctest::Approx(1.6 + 300.0 * 2.5e-3));
    CHECK(blocked_force(cal, kPet, 40.0, 2500.0) == blocked_force(cal, kPet, 40.0, 2000.0));
}

TEST_CASE("blocked force is continuous at threshold and monotone in voltage") {
    const auto& cal = ThrustCalibration::bundled();
    for (const auto& e : cal.designs) {
        const double th = cal.threshold_voltage.at(e.design.variant);
        CHECK(blocked_force(cal, e.design, e.f_opt, th + 1e-9) < 1e-9);
        for (double f : {e.f_opt * 0.5, e.f_opt, e.f_opt * 1.3}) {
            double prev = 0.0;
            for (double u = 0.0; u <= 2500.0; u += 5.0) {
                const double force = blocked_force(cal, e.design, f, u);
                CHECK(force >= prev);
                prev = force;
            }
        }
    }
}

TEST_CASE("frequency optimum is the design f_opt at every voltage") {
    const auto& cal = ThrustCalibration::bundled();
    for (const auto& e : cal.designs) {
        const double th = cal.threshold_voltage.at(e.design.variant);
        for (double u = th + 50.0; u <= th + 900.0; u += 100.0) {
            double best_f = 0.0;
            double best = -1.0;
            for (double f = 1.0; f <= 100.0; f += 0.5) {
                const double force = blocked_force(cal, e.design, f, u);
                if (force > best) {
                    best = force;
                    best_f = f;
                }
            }
            CHECK(best_f == e.f_opt);
        }
    }
}

TEST_CASE("unknown design is rejected") {
    const auto& cal = ThrustCalibration::bundled();
    CHECK_THROWS_AS(blocked_force(cal, ModuleDesign{25, 30, 2, Variant::PVDF}, 40.0, 1500.0), std::invalid_argument);
    CHECK_THROWS_AS((ModuleDesign{35, 20, 4, Variant::PET}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((ModuleDesign{45, 12, 2, Variant::PET}.validate()), std::invalid_argument);
}

TEST_CASE("design peaks") {
    const auto& cal = ThrustCalibration::bundled();
    const auto wide = design_peak(cal, ModuleDesign{45, 30, 2, Variant::PET});
    CHECK(wide.f_opt == 25.0);
    CHECK(wide.peak_force_mN == 1.4);
    REQUIRE(wide.power_mW.has_value());
    CHECK(*wide.power_mW == 13.0);
    const auto base = design_peak(cal, kPet);
    CHECK(base.f_opt == 40.0);
    CHECK(base.peak_force_mN == 1.6);
    CHECK(wide.f_opt < base.f_opt);

    // f_opt falls with span; smaller bodies run faster.
    double prev = 1e9;
    for (int span : {10, 15, 20, 25, 30}) {
        const auto p = design_peak(cal, ModuleDesign{45, span, 2, Variant::PET});
        CHECK(p.f_opt < prev);
        prev = p.f_opt;
    }
    double prev_force = 0.0;
    for (int span : {10, 15, 20}) {
        const auto p = design_peak(cal, ModuleDesign{45, span, 2, Variant::PET});
        CHECK(p.peak_force_mN >= prev_force);
        prev_force = p.peak_force_mN;
    }
    CHECK(design_peak(cal, ModuleDesign{25, 10, 2, Variant::PET}).f_opt >
          design_peak(cal, ModuleDesign{45, 20, 2, Variant::PET}).f_opt);
}

TEST_CASE("efficiency") {
    CHECK(efficiency(1.4, 13.0) == doctest::Approx(0.1077).epsilon(5e-4));
    CHECK(efficiency(0.0, 13.0) == 0.0);
    CHECK(efficiency(2.8, 26.0) == doctest::Approx(efficiency(1.4, 13.0)));
    CHECK_THROWS_AS(efficiency(1.4, 0.0), std::invalid_argument);
}

TEST_CASE("degradation") {
    for (auto v : {Variant::PET, Variant::PVDF}) {
        const auto m = DegradationModel::defaults(v);
        CHECK(degradation_factor(0.0, m).multiplier == 1.0);
        CHECK_FALSE(degradation_factor(0.0, m).failed);
        CHECK(degradation_factor(m.stable_cycles, m).multiplier == 1.0);
        const double plateau = degradation_factor(m.plateau_cycles, m).multiplier;
        CHECK(plateau >= 0.4);
        CHECK(plateau <= 0.5);
        double prev = 1.0;
        for (double c = 0.0; c < m.lifetime_cycles * 1.2; c += m.lifetime_cycles / 500.0) {
            const auto d = degradation_factor(c, m);
            CHECK(d.multiplier <= prev);
            CHECK(d.multiplier > 0.0);
            prev = d.multiplier;
        }
    }
    CHECK(degradation_factor(768600.0, Variant::PVDF).failed);
    CHECK_FALSE(degradation_factor(768599.0, Variant::PVDF).failed);
    CHECK_THROWS_AS(degradation_factor(-1.0, Variant::PET), std::invalid_argument);
}

TEST_CASE("calibration JSON round trip and validation") {
    const auto& cal = ThrustCalibration::bundled();
    CHECK(cal.contains(kPet));
    nlohmann::json bad = {{"threshold_voltage", {{"PET", 1200}}},
                          {"designs",
                           {{{"design", kPet},
                             {"f_opt", 40},
                             {"peak_force_mN", 1.6},
                             {"voltage_anchors", {{1200, 0.0}, {1500, 1.1}, {1400, 1.6}}}}}}};
    CHECK_THROWS_AS(ThrustCalibration::from_json(bad), std::invalid_argument);
    nlohmann::json j = kPet;
    CHECK(j.get<ModuleDesign>() == kPet);
    CHECK(kPet.key() == "PET-45-20-2");
}
