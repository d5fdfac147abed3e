// Prints one PASS/FAIL line per acceptance criterion; exits non-zero on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "flatswim/actuator.hpp"
#include "flatswim/cantilever.hpp"
#include "flatswim/comparison.hpp"
#include "flatswim/dynamics.hpp"
#include "flatswim/flow/lic.hpp"
#include "flatswim/flow/selftest.hpp"
#include "flatswim/flow/wake.hpp"
#include "flatswim/geometry.hpp"
#include "flatswim/hvps.hpp"
#include "flatswim/scenario.hpp"
#include "flatswim/simulation.hpp"
#include "flatswim/thrust.hpp"
#include "image_stats.hpp"

using namespace flatswim;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

int failures = 0;

void criterion(const char* name, const std::function<Outcome()>& check) {
    Outcome o;
    try {
        o = check();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("%s  %-24s %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    std::fflush(stdout);
}

scenario::ScenarioConfig bundled(const std::string& name) {
    return scenario::load_scenario(scenario::resolve_scenario(name));
}

std::string telemetry_text(const std::vector<sim::TelemetryRow>& rows) {
    std::string out;
    for (const auto& r : rows) {
        out += sim::format_row(r);
        out += '\n';
    }
    return out;
}

Outcome cantilever_rigidity() {
    const auto t0 = Clock::now();
    const double ei = cantilever::flexural_rigidity(55.576, 0.936e-3, 67e-3);
    const double dt = seconds_since(t0);
    const double mnm2 = ei * 1e3;
    const bool ok = fmt("%.5g", mnm2) == fmt("%.5g", 0.18775) && dt < 1e-3;
    return {ok, fmt("EI = %.5g mN·m² (target 0.18775) in %.1f µs", mnm2, dt * 1e6)};
}

Outcome inverse_round_trip() {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> fd(1e-6, 5e-3), pos(1e-4, 67e-3), eid(1e-5, 1e-3);
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const double f = fd(rng);
        const double a = pos(rng);
        const double b = pos(rng);
        const double ei = eid(rng);
        const double back = cantilever::force_from_deflection(cantilever::deflection(a, f, b, ei), a, b, ei);
        worst = std::max(worst, std::abs(back - f) / f);
    }
    return {worst <= 1e-12, fmt("worst relative error %.3g over 1e4 triples", worst)};
}

Outcome thrust_anchors() {
    using thrust::ModuleDesign;
    using thrust::Variant;
    const auto& cal = thrust::ThrustCalibration::bundled();
    const ModuleDesign pet{45, 20, 2, Variant::PET};
    const ModuleDesign pvdf{45, 20, 2, Variant::PVDF};
    const double a = thrust::blocked_force(cal, pet, 40.0, 1500.0);
    const double b = thrust::blocked_force(cal, pet, 40.0, 1700.0);
    const double c = thrust::blocked_force(cal, pvdf, 30.0, 500.0);
    bool zero = true;
    for (double u : {0.0, 600.0, 1199.0, 1200.0}) zero = zero && thrust::blocked_force(cal, pet, 40.0, u) == 0.0;
    for (double u : {0.0, 200.0, 400.0}) zero = zero && thrust::blocked_force(cal, pvdf, 30.0, u) == 0.0;
    const bool ok = a == 1.1 && b == 1.6 && c == 0.8 && zero;
    return {ok, fmt("PET 1500 V %.12g mN, 1700 V %.12g mN; PVDF 500 V %.12g mN; zero below thresholds: %s", a, b, c,
                    zero ? "yes" : "no")};
}

Outcome power_law() {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> cd(10e-12, 2e-9), ud(100.0, 3000.0), fd(1.0, 100.0);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double cap = cd(rng);
        const double u = ud(rng);
        std::vector<actuator::PowerSample> sweep;
        for (int k = 0; k < 2 + i % 10; ++k) {
            const double f = fd(rng);
            sweep.push_back({f, actuator::drive_power(cap, f, u)});
        }
        worst = std::max(worst, std::abs(actuator::capacitance_from_power_sweep(sweep, u) / cap - 1.0));
    }
    const double p = actuator::drive_power(360e-12, 25.0, 1700.0) * 1e3;
    const bool ok = worst <= 1e-12 && std::abs(p - 13.0) <= 0.1;
    return {ok, fmt("sweep worst %.3g; drive_power(360 pF, 25 Hz, 1700 V) = %.3f mW", worst, p)};
}

Outcome calibrated_dynamics() {
    struct Target {
        const char* scenario;
        bool rotation;
        double lo;
        double hi;
    };
    const Target targets[] = {
        {"tethered-forward-2kv", false, 12.0 * 0.95, 12.0 * 1.05},
        {"tethered-turn-1k7", true, 120.0 * 0.95, 120.0 * 1.05},
        {"untethered-forward", false, 5.14 * 0.95, 5.14 * 1.05},
        {"untethered-turn", true, 195.0 * 0.95, 195.0 * 1.05},
        {"four-act-forward", false, 6.7 * 0.9, 6.7 * 1.1},
        {"four-act-backward", false, 6.4 * 0.9, 6.4 * 1.1},
        {"four-act-side-left", false, 2.8, 4.1},
        {"four-act-side-right", false, 2.8, 4.1},
    };
    bool ok = true;
    std::string detail;
    for (const auto& t : targets) {
        const auto c = bundled(t.scenario);
        const auto t0 = Clock::now();
        const auto r = sim::run(c);
        const double secs = seconds_since(t0);
        const bool same = sim::run(c).telemetry == r.telemetry;
        const double v = t.rotation ? rad_to_deg(r.summary.steady_abs_omega) : r.summary.steady_speed * 100.0;
        const bool pass = v >= t.lo && v <= t.hi && secs < 30.0 && same;
        ok = ok && pass;
        detail += fmt("%s%s %.3f %s%s", detail.empty() ? "" : "; ", t.scenario, v, t.rotation ? "deg/s" : "cm/s",
                      pass ? "" : " (out of range, slow or not repeatable)");
    }
    return {ok, detail};
}

Outcome energy_budget() {
    const hvps::PowerState driving{hvps::PowerMode::Driving, 2, 30.0};
    const double endurance = hvps::battery_endurance(30.0, 3.7, driving);
    const auto r = sim::run(bundled("battery-depletion"));
    const double depleted = r.summary.depleted_at.value_or(std::numeric_limits<double>::infinity());
    const bool ok = std::abs(endurance - 11.2 * 60.0) <= 1.0 && depleted >= 9 * 60.0 && depleted <= 13 * 60.0;
    return {ok, fmt("endurance %.3f s (%.3f min); simulated depletion at %.1f s (%.2f min)", endurance,
                    endurance / 60.0, depleted, depleted / 60.0)};
}

Outcome hvps_anchors() {
    const hvps::ConverterConfig nominal{2.5e-6, 20e3, 3.9};
    const double v1 = hvps::output_voltage(nominal, 1, 30.0);
    const double v2 = hvps::output_voltage(nominal, 2, 30.0);
    const double idle = hvps::system_power({hvps::PowerMode::Idle, 0, 0.0}) * 1e3;
    const double on = hvps::system_power({hvps::PowerMode::ConverterOn, 0, 0.0}) * 1e3;
    const double drive = hvps::system_power({hvps::PowerMode::Driving, 2, 30.0}) * 1e3;
    const auto exact = [](double a, double b) { return std::abs(a - b) <= 1e-9; };
    const bool ok = v1 == 710.0 && v2 == 620.0 && exact(idle, 237.0) && exact(on, 530.0) && exact(drive, 595.0);
    return {ok, fmt("1 ch %.17g V, 2 ch %.17g V; power %.12g / %.12g / %.12g mW", v1, v2, idle, on, drive)};
}

Outcome piv_oracle() {
    const auto cases = flow::piv_selftest(1);
    bool ok = cases.size() == 3;
    double slowest = 0.0;
    std::string detail;
    for (const auto& c : cases) {
        ok = ok && c.pass;
        slowest = std::max(slowest, c.seconds);
        detail += fmt("%s %.4f px (tol %.2f); ", c.name.c_str(), c.rms_error, c.tolerance);
    }
    ok = ok && slowest < 10.0;
    detail += fmt("slowest 1024x1024 pass %.2f s single-threaded", slowest);
    return {ok, detail};
}

Outcome lic_properties() {
    const auto wake = flow::synthesize_wake(0.12, flow::WakeMode::Forward);
    const bool deterministic = flow::lic_render(wake, 11) == flow::lic_render(wake, 11);

    const auto still = flow::lic_render(flow::uniform_field(128, 96, 1e-3, {0.0, 0.0}), 4);
    const auto noise = flow::texture_to_gray(flow::pink_noise(128, 96, 4));
    int worst = 0;
    for (std::size_t i = 0; i < still.data.size(); ++i)
        worst = std::max(worst, std::abs(int(still.data[i]) - int(noise.data[i])));

    const auto img = flow::lic_render(flow::uniform_field(200, 200, 1e-3, {1.0, 0.0}), 2);
    const double along = test::correlation_length(img, 1, 0, 30);
    const double across = test::correlation_length(img, 0, 1, 30);
    const bool ok = deterministic && worst <= 1 && along >= 3.0 * across;
    return {ok, fmt("bit-identical %s; zero field max diff %d level; correlation length along %.2f px, across %.2f px",
                    deterministic ? "yes" : "no", worst, along, across)};
}

Outcome comparison_fit() {
    const auto s = comparison::fit_sensitivity(comparison::bundled_table());
    const bool ok = s.all_rows >= 62.0 && s.all_rows <= 85.0;
    return {ok, fmt("slope %.2f deg/s per CS/s over %zu rows (%.2f excluding this work)", s.all_rows, s.rows_used,
                    s.excluding_this_work)};
}

Outcome determinism() {
    bool ok = true;
    std::string bad;
    std::size_t count = 0;
    for (const auto& name : scenario::bundled_scenarios()) {
        auto c = bundled(name);
        c.workers = 1;
        const auto ref = telemetry_text(sim::run(c).telemetry);
        bool same = telemetry_text(sim::run(c).telemetry) == ref && telemetry_text(sim::run(c).telemetry) == ref;
        c.workers = 8;
        same = same && telemetry_text(sim::run(c).telemetry) == ref;
        if (!same) bad += " " + name;
        ok = ok && same;
        ++count;
    }
    return {ok && count > 0, fmt("%zu scenarios byte-identical over 3 runs and 1/8 workers%s%s", count,
                                 bad.empty() ? "" : "; differing:", bad.c_str())};
}

Outcome payload_boundary() {
    const double limit = 5.1e-3;
    const double above = std::nextafter(limit, 1.0);
    const bool ok = dynamics::payload_check(limit) == dynamics::Buoyancy::Floats &&
                    dynamics::payload_check(above) == dynamics::Buoyancy::Sinks;
    return {ok, fmt("%.17g kg floats, %.17g kg sinks", limit, above)};
}

}  // namespace

int main() {
    criterion("cantilever-rigidity", cantilever_rigidity);
    criterion("inverse-force-round-trip", inverse_round_trip);
    criterion("thrust-anchors", thrust_anchors);
    criterion("power-law", power_law);
    criterion("calibrated-dynamics", calibrated_dynamics);
    criterion("energy-budget", energy_budget);
    criterion("hvps-anchors", hvps_anchors);
    criterion("piv-oracle", piv_oracle);
    criterion("lic-properties", lic_properties);
    criterion("comparison-fit", comparison_fit);
    criterion("determinism", determinism);
    criterion("payload-boundary", payload_boundary);
    std::printf("%s: %d failing\n", failures == 0 ? "ALL PASS" : "FAILURES", failures);
    return failures == 0 ? 0 : 1;
}
