#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "flatswim/geometry.hpp"
#include "flatswim/scenario.hpp"
#include "flatswim/simulation.hpp"
#include "support.hpp"

using namespace flatswim;
using namespace flatswim::sim;
using nlohmann::json;

namespace {

scenario::ScenarioConfig bundled(const std::string& name) {
    return scenario::load_scenario(scenario::resolve_scenario(name));
}

scenario::ScenarioConfig parse(json j) {
    j["arena"] = {{"width", 1.3}, {"height", 0.5}};
    return scenario::parse_scenario(j);
}

}  // namespace

TEST_CASE("zero duration") {
    const auto c = parse({{"robot", json::object()}, {"duration", 0.0}});
    const auto r = run(c);
    CHECK(r.telemetry.empty());
    CHECK(r.summary.duration == 0.0);
    CHECK(r.summary.distance == 0.0);
    CHECK(r.summary.mean_speed == 0.0);
}

TEST_CASE("idle robot stays put") {
    const auto r = run(parse({{"robot", json::object()}, {"duration", 1.0}}));
    REQUIRE(r.telemetry.size() == 100);
    CHECK(r.summary.distance == 0.0);
    CHECK(r.summary.energy_J == 0.0);
    CHECK(r.telemetry.back().x == 0.65);
    CHECK(r.telemetry.back().active_set.empty());
}

TEST_CASE("summary mean speed matches the telemetry") {
    const auto r = run(bundled("tethered-forward-2kv"));
    double sum = 0.0;
    for (const auto& row : r.telemetry) sum += std::hypot(row.vx, row.vy);
    CHECK(r.summary.mean_speed == doctest::Approx(sum / static_cast<double>(r.telemetry.size())).epsilon(1e-9));
    CHECK(r.summary.max_speed >= r.summary.steady_speed);
    CHECK(r.summary.body_lengths_per_s == doctest::Approx(r.summary.steady_speed / 0.045));
}

TEST_CASE("runs are deterministic") {
    for (const char* name : {"push-101g", "light-sequence", "four-act-side-left"}) {
        CAPTURE(name);
        auto c = bundled(name);
        const auto a = run(c).telemetry;
        CHECK(run(c).telemetry == a);
        c.workers = 8;
        CHECK(run(c).telemetry == a);
    }
}

TEST_CASE("telemetry CSV round trip") {
    test::TempDir dir("telemetry");
    auto c = bundled("four-act-side-left");
    c.duration = 1.0;
    const auto rows = run(c).telemetry;
    write_telemetry_csv(dir / "t.csv", rows);
    const auto back = read_telemetry_csv(dir / "t.csv");
    REQUIRE(back.size() == rows.size());
    for (std::size_t k = 0; k < rows.size(); ++k) {
        CHECK(back[k].active_set == rows[k].active_set);
        CHECK(back[k].x == doctest::Approx(rows[k].x).epsilon(1e-11));
        CHECK(format_row(back[k]) == format_row(rows[k]));
    }
    CHECK(rows.back().active_set == "FR;RR");
    CHECK_THROWS_AS(read_telemetry_csv(dir / "none.csv"), std::runtime_error);
}

TEST_CASE("untethered speeds") {
    const auto fwd = run(bundled("untethered-forward")).summary;
    CHECK(fwd.steady_speed == doctest::Approx(0.0514).epsilon(0.05));
    const auto turn = run(bundled("untethered-turn")).summary;
    CHECK(rad_to_deg(turn.steady_abs_omega) == doctest::Approx(195.0).epsilon(0.05));
    CHECK(fwd.energy_J > 0.0);
    CHECK(fwd.final_battery_J < bundled("untethered-forward").battery.capacity_J());
}

TEST_CASE("scenario thrust anchors drive the simulation") {
    auto j = scenario::to_json(bundled("tethered-forward-2kv"));
    const double base = run(bundled("tethered-forward-2kv")).summary.steady_speed;
    json anchors = json::array();
    for (const auto& a : j["thrust_anchors"]["voltage_anchors"]) anchors.push_back({a[0], 4.0 * a[1].get<double>()});
    j["thrust_anchors"]["voltage_anchors"] = anchors;
    const auto c = scenario::parse_scenario(j);
    CHECK(run(c).summary.steady_speed == doctest::Approx(2.0 * base).epsilon(0.005));
}

TEST_CASE("push scenario moves the obstacle") {
    Simulation s(bundled("push-101g"));
    while (!s.finished()) s.tick();
    CHECK(s.world().obstacles[0].position.x > 0.4);
}

TEST_CASE("sinking payload stops propulsion") {
    const auto c = parse({{"robot", {{"payload_kg", 0.0052}}},
                          {"duration", 1.0},
                          {"controller", {{"script", {{{"t", 0.0}, {"cmd", "forward"}, {"duration", 1.0}}}}}}});
    const auto r = run(c);
    CHECK(r.summary.sunk);
    CHECK(r.summary.distance == 0.0);
}

TEST_CASE("light schedule and injected toggles") {
    Simulation s(bundled("teleop-4act"));
    CHECK_FALSE(s.lights()[0].on);
    s.set_light(0, true);
    CHECK_FALSE(s.lights()[0].on);
    s.tick();
    CHECK(s.lights()[0].on);
    CHECK_THROWS_AS(s.set_light(3, true), std::out_of_range);
}

TEST_CASE("injected commands match scripted ones") {
    // The same presses, once from a script and once injected between ticks.
    const std::vector<std::pair<double, const char*>> presses = {
        {0.0, "forward"}, {0.3, "turn_left"}, {1.0, "side_right"}, {1.2, "stop"}, {1.5, "rotate_cw"}};
    json script = json::array();
    for (const auto& [t, cmd] : presses) script.push_back({{"t", t}, {"cmd", cmd}});
    const json robot = {{"build", "tethered-4act"}, {"position", {0.4, 0.25}}};
    const auto scripted = parse({{"robot", robot}, {"duration", 3.0}, {"controller", {{"script", script}}}});
    const auto teleop = parse({{"robot", robot}, {"duration", 3.0}, {"controller", {{"mode", "teleop"}}}});

    const auto expected = run(scripted).telemetry;
    Simulation s(teleop);
    std::vector<TelemetryRow> got;
    std::size_t next = 0;
    while (!s.finished()) {
        while (next < presses.size() && std::llround(presses[next].first / teleop.dt) == s.tick_count())
            s.inject({control::parse_command(presses[next++].second)});
        if (auto row = s.tick()) got.push_back(*row);
    }
    CHECK(got == expected);
}

TEST_CASE("wire messages") {
    Simulation s(bundled("teleop-untethered"));
    const auto w = s.world_message();
    CHECK(w["type"] == "world");
    CHECK(w["protocol"] == 1);
    CHECK(w["robot"]["fins"] == json::array({"L", "R"}));
    CHECK(w["robot"]["commands"] == json::array({"forward", "turn_left", "turn_right", "stop"}));
    s.inject({control::CommandKind::Forward});
    s.tick();
    const auto st = s.state_message();
    CHECK(st["type"] == "state");
    CHECK(st["active"] == json::array({"L", "R"}));
    CHECK(st["burst"]["remaining_s"].get<double>() == doctest::Approx(0.499));
    CHECK(st["t"].get<double>() == doctest::Approx(0.001));
    CHECK_THROWS_AS(s.inject({control::CommandKind::Backward}), std::invalid_argument);
}

TEST_CASE("summary of telemetry rows") {
    std::vector<TelemetryRow> rows(3);
    for (int k = 0; k < 3; ++k) {
        rows[k].t = 0.5 * (k + 1);
        rows[k].x = 0.1 * k;
        rows[k].vx = 0.2;
        rows[k].omega = -1.0;
        rows[k].power_W = 2.0;
    }
    const auto s = summarize(rows, 0.6, 0.05, 0.1);
    CHECK(s.mean_speed == doctest::Approx(0.2));
    CHECK(s.distance == doctest::Approx(0.2));
    CHECK(s.energy_J == doctest::Approx(3.0));
    CHECK(s.steady_abs_omega == doctest::Approx(1.0));
    CHECK(s.body_lengths_per_s == doctest::Approx(4.0));
    CHECK(s.sizes_per_s == doctest::Approx(2.0));
    CHECK(summarize({}, 1.0, 0.05, 0.1).mean_speed == 0.0);
}
