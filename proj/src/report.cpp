#include "flatswim/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "flatswim/flow/lic.hpp"
#include "flatswim/flow/wake.hpp"
#include "flatswim/geometry.hpp"

namespace flatswim::report {

namespace fs = std::filesystem;

std::string_view to_string(ReportKind kind) {
    switch (kind) {
        case ReportKind::SpeedCurve: return "speed-curve";
        case ReportKind::ForceMap: return "force-map";
        case ReportKind::LicFrame: return "lic-frame";
        case ReportKind::Summary: return "summary";
    }
    return "?";
}

ReportKind parse_report_kind(std::string_view s) {
    for (auto k : {ReportKind::SpeedCurve, ReportKind::ForceMap, ReportKind::LicFrame, ReportKind::Summary})
        if (to_string(k) == s) return k;
    throw std::invalid_argument("unknown report kind '" + std::string(s) +
                                "' (speed-curve, force-map, lic-frame, summary)");
}

std::vector<double> force_map_voltages() {
    std::vector<double> v;
    for (int i = 0; i <= 44; ++i) v.push_back(50.0 * i);
    return v;
}

std::vector<double> force_map_frequencies() {
    std::vector<double> f;
    for (int i = 1; i <= 16; ++i) f.push_back(5.0 * i);
    return f;
}

namespace {

std::ofstream open_out(const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    return out;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

fs::path speed_curve(const std::vector<sim::TelemetryRow>& rows, const ReportOptions& o) {
    const fs::path path = o.out_dir / "speed_curve.csv";
    auto out = open_out(path);
    out << "t,speed_m_s,speed_bl_s,abs_omega_rad_s,abs_omega_deg_s\n";
    for (const auto& r : rows) {
        const double v = std::hypot(r.vx, r.vy);
        out << fmt(r.t) << ',' << fmt(v) << ',' << fmt(v / o.body_length) << ',' << fmt(std::abs(r.omega)) << ','
            << fmt(rad_to_deg(std::abs(r.omega))) << '\n';
    }
    return path;
}

fs::path force_map(const ReportOptions& o) {
    const auto& cal = thrust::ThrustCalibration::bundled();
    const fs::path path = o.out_dir / "force_map.csv";
    auto out = open_out(path);
    out << "design,variant,f_act_Hz,voltage_V,force_mN\n";
    for (const auto& e : cal.designs)
        for (double f : force_map_frequencies())
            for (double u : force_map_voltages())
                out << e.design.key() << ',' << thrust::to_string(e.design.variant) << ',' << fmt(f) << ','
                    << fmt(u) << ',' << fmt(thrust::blocked_force(cal, e.design, f, u)) << '\n';
    return path;
}

fs::path lic_frame(const std::vector<sim::TelemetryRow>& rows, const ReportOptions& o) {
    const auto s = sim::summarize(rows, o.steady_window, o.body_length, o.characteristic_size);
    const double radius = 0.5 * o.characteristic_size;
    const auto mode = s.steady_abs_omega * radius > s.steady_speed ? flow::WakeMode::Turning : flow::WakeMode::Forward;
    const auto field = flow::synthesize_wake(s.steady_speed, mode);
    flow::LicParams params;
    params.workers = o.workers;
    const fs::path path = o.out_dir / "lic_frame.png";
    flow::write_image(path, flow::lic_render(field, o.seed, params));
    return path;
}

fs::path summary(const std::vector<sim::TelemetryRow>& rows, const ReportOptions& o) {
    const auto s = sim::summarize(rows, o.steady_window, o.body_length, o.characteristic_size);
    const fs::path path = o.out_dir / "summary.json";
    auto out = open_out(path);
    out << sim::to_json(s).dump(2) << '\n';
    return path;
}

}  // namespace

std::vector<fs::path> report(const std::vector<sim::TelemetryRow>& rows, ReportKind kind, const ReportOptions& o) {
    if (!(o.body_length > 0.0) || !(o.characteristic_size > 0.0))
        throw std::invalid_argument("report: body length and size must be > 0");
    fs::create_directories(o.out_dir);
    switch (kind) {
        case ReportKind::SpeedCurve: return {speed_curve(rows, o)};
        case ReportKind::ForceMap: return {force_map(o)};
        case ReportKind::LicFrame: return {lic_frame(rows, o)};
        case ReportKind::Summary: return {summary(rows, o)};
    }
    throw std::invalid_argument("report: unknown kind");
}

}  // namespace flatswim::report
