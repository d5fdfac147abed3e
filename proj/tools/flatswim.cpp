// flatswim: command-line front end for the swimmer simulator and flow tools.

#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "flatswim/calibrate.hpp"
#include "flatswim/comparison.hpp"
#include "flatswim/flow/field.hpp"
#include "flatswim/flow/lic.hpp"
#include "flatswim/flow/selftest.hpp"
#include "flatswim/flow/wake.hpp"
#include "flatswim/geometry.hpp"
#include "flatswim/report.hpp"
#include "flatswim/scenario.hpp"
#include "flatswim/service.hpp"
#include "flatswim/simulation.hpp"

using namespace flatswim;
using nlohmann::json;

namespace {

int cmd_run(const std::string& name, const std::string& out, const std::string& summary_out, int workers) {
    auto config = scenario::load_scenario(scenario::resolve_scenario(name));
    if (workers > 0) config.workers = static_cast<unsigned>(workers);
    const auto result = sim::run(config);
    if (!out.empty()) sim::write_telemetry_csv(out, result.telemetry);
    const json summary = sim::to_json(result.summary);
    if (!summary_out.empty()) {
        std::FILE* f = std::fopen(summary_out.c_str(), "wb");
        if (!f) throw std::runtime_error("cannot write " + summary_out);
        const std::string text = summary.dump(2) + "\n";
        std::fwrite(text.data(), 1, text.size(), f);
        std::fclose(f);
    }
    std::cout << summary.dump(2) << '\n';
    return 0;
}

int cmd_serve(const std::string& name, const service::ServeOptions& options) {
    service::serve(scenario::load_scenario(scenario::resolve_scenario(name)), options);
    return 0;
}

int cmd_report(const std::string& telemetry, const std::string& kind, const std::string& scenario_name,
               report::ReportOptions options) {
    if (!scenario_name.empty()) {
        const auto config = scenario::load_scenario(scenario::resolve_scenario(scenario_name));
        options.body_length = config.build.body_length;
        options.characteristic_size = config.build.characteristic_size;
        options.steady_window = config.steady_window;
    }
    const auto k = report::parse_report_kind(kind);
    const auto rows = k == report::ReportKind::ForceMap ? std::vector<sim::TelemetryRow>{}
                                                        : sim::read_telemetry_csv(telemetry);
    for (const auto& path : report::report(rows, k, options)) std::cout << path.string() << '\n';
    return 0;
}

int cmd_piv_selftest(std::uint64_t seed, unsigned workers) {
    flow::PivParams piv;
    piv.workers = workers;
    bool ok = true;
    for (const auto& c : flow::piv_selftest(seed, {}, piv)) {
        std::printf("%-16s rms %.4f px (tol %.2f)  %zu vectors  %.2f s  %s\n", c.name.c_str(), c.rms_error,
                    c.tolerance, c.vectors, c.seconds, c.pass ? "PASS" : "FAIL");
        ok = ok && c.pass;
    }
    return ok ? 0 : 1;
}

int cmd_lic(const std::string& field_name, std::uint64_t seed, const std::string& out, double speed, unsigned workers) {
    flow::FlowField field;
    if (field_name == "wake-forward") field = flow::synthesize_wake(speed, flow::WakeMode::Forward);
    else if (field_name == "wake-turning") field = flow::synthesize_wake(speed, flow::WakeMode::Turning);
    else if (field_name == "uniform") field = flow::uniform_field(201, 121, 1e-3, {speed, 0.0});
    else field = flow::read_field_csv(field_name);
    flow::LicParams params;
    params.workers = workers;
    flow::write_image(out, flow::lic_render(field, seed, params));
    std::cout << out << '\n';
    return 0;
}

int cmd_calibrate(const std::string& target) {
    const auto fit = calibration::calibrate(target);
    const auto& p = fit.params;
    const json j = {{"target", fit.name},
                    {"translation_thrust_mN", fit.translation_thrust * 1e3},
                    {"rotation_torque_uNm", fit.rotation_torque * 1e6},
                    {"translation_speed_cm_s", fit.translation_speed * 1e2},
                    {"rotation_rate_deg_s", rad_to_deg(fit.rotation_rate)},
                    {"dynamics",
                     {{"effective_mass", p.effective_mass},
                      {"effective_inertia", p.effective_inertia},
                      {"drag_quadratic", p.drag_quadratic},
                      {"rotational_drag", p.rotational_drag},
                      {"fin_moment_arm", p.fin_moment_arm},
                      {"body_radius", p.body_radius}}}};
    std::cout << j.dump(2) << '\n';
    return 0;
}

int cmd_compare() {
    const auto& rows = comparison::bundled_table();
    const auto s = comparison::fit_sensitivity(rows);
    std::printf("rotation vs relative speed, origin-constrained\n");
    std::printf("  all maneuverable rows (%zu): %.2f deg/s per CS/s\n", s.rows_used, s.all_rows);
    std::printf("  excluding this work (%zu):   %.2f deg/s per CS/s\n", s.rows_used_excluding, s.excluding_this_work);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"flatswim: surface swimmer simulator, service and flow tools"};
    app.require_subcommand(1);

    std::string scenario_name;
    std::string out;
    std::string summary_out;
    int run_workers = 0;
    auto* run = app.add_subcommand("run", "Run a scenario headless and write telemetry");
    run->add_option("scenario", scenario_name, "Bundled scenario name or JSON path")->required();
    run->add_option("-o,--out", out, "Telemetry CSV path");
    run->add_option("--summary", summary_out, "Also write the summary JSON here");
    run->add_option("--workers", run_workers, "Worker threads (0 keeps the scenario value)");

    service::ServeOptions serve_options;
    auto* serve = app.add_subcommand("serve", "Serve a live scenario over WebSocket");
    serve->add_option("scenario", scenario_name, "Bundled scenario name or JSON path")->required();
    serve->add_option("--port", serve_options.port, "TCP port")->capture_default_str();
    serve->add_option("--address", serve_options.address, "Bind address")->capture_default_str();
    serve->add_option("--rate", serve_options.state_rate_hz, "State broadcasts per simulated second")->capture_default_str();
    serve->add_option("--speed", serve_options.speed, "Simulated seconds per wall second")->capture_default_str();

    std::string telemetry;
    std::string kind;
    std::string report_scenario;
    report::ReportOptions report_options;
    std::string out_dir = ".";
    auto* rep = app.add_subcommand("report", "Write plot-ready artifacts");
    rep->add_option("telemetry", telemetry, "Telemetry CSV")->required();
    rep->add_option("--kind", kind, "speed-curve, force-map, lic-frame or summary")->required();
    rep->add_option("--out-dir", out_dir, "Output directory")->capture_default_str();
    rep->add_option("--seed", report_options.seed, "Noise seed for lic-frame")->capture_default_str();
    rep->add_option("--scenario", report_scenario, "Scenario supplying body size and steady window");

    std::uint64_t seed = 1;
    unsigned workers = 1;
    auto* piv = app.add_subcommand("piv-selftest", "Check PIV against synthetic particle pairs");
    piv->add_option("--seed", seed, "Particle seed")->capture_default_str();
    piv->add_option("--workers", workers, "Worker threads (0 = all cores)")->capture_default_str();

    std::string field_name;
    std::string lic_out = "lic.png";
    double speed = 0.12;
    auto* lic = app.add_subcommand("lic", "Render a flow field with line integral convolution");
    lic->add_option("field", field_name, "Field CSV, or wake-forward, wake-turning, uniform")->required();
    lic->add_option("--seed", seed, "Noise seed")->required();
    lic->add_option("-o,--out", lic_out, "Output image (.png or .pgm)")->capture_default_str();
    lic->add_option("--speed", speed, "Robot speed for built-in fields, m/s")->capture_default_str();
    lic->add_option("--workers", workers, "Worker threads (0 = all cores)")->capture_default_str();

    std::string target;
    auto* cal = app.add_subcommand("calibrate", "Fit dynamics parameters to an anchor set");
    cal->add_option("--target", target, "Anchor set: tethered, untethered, four-actuator")->required();

    auto* cmp = app.add_subcommand("compare", "Fit rotation speed against relative speed");
    auto* list = app.add_subcommand("scenarios", "List bundled scenarios");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) return cmd_run(scenario_name, out, summary_out, run_workers);
        if (*serve) return cmd_serve(scenario_name, serve_options);
        if (*rep) {
            report_options.out_dir = out_dir;
            return cmd_report(telemetry, kind, report_scenario, report_options);
        }
        if (*piv) return cmd_piv_selftest(seed, workers);
        if (*lic) return cmd_lic(field_name, seed, lic_out, speed, workers);
        if (*cal) return cmd_calibrate(target);
        if (*cmp) return cmd_compare();
        if (*list) {
            for (const auto& s : scenario::bundled_scenarios()) std::cout << s << '\n';
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
