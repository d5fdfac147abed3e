#include "flatswim/cantilever.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>

namespace flatswim::cantilever {

void CantileverSpec::validate() const {
    if (!(rho > 0.0) || !(length > 0.0)) throw std::invalid_argument("cantilever: rho and length must be > 0");
    if (!(sensor_point > 0.0 && sensor_point <= length))
        throw std::invalid_argument("cantilever: sensor point must lie in (0, l]");
    if (!(contact_point > 0.0 && contact_point <= length))
        throw std::invalid_argument("cantilever: contact point must lie in (0, l]");
    if (resonance.has_value() == flexural_rigidity.has_value())
        throw std::invalid_argument("cantilever: exactly one of resonance or flexural_rigidity must be set");
}

double CantileverSpec::ei() const {
    validate();
    return flexural_rigidity ? *flexural_rigidity : cantilever::flexural_rigidity(*resonance, rho, length);
}

CantileverSpec CantileverSpec::bench() {
    CantileverSpec s;
    s.resonance = 55.576;
    return s;
}

double flexural_rigidity(double resonance, double rho, double length) {
    if (!(resonance > 0.0) || !(rho > 0.0) || !(length > 0.0))
        throw std::invalid_argument("flexural_rigidity: inputs must be > 0");
    constexpr double mode_factor = 4.0 * std::numbers::pi * std::numbers::pi / (3.5 * 3.5);
    return mode_factor * resonance * resonance * rho * std::pow(length, 4);
}

double deflection(double x, double force, double b, double ei) {
    if (x <= b) return force * x * x * (3.0 * b - x) / (6.0 * ei);
    return force * b * b * (3.0 * x - b) / (6.0 * ei);
}

double force_from_deflection(double d_meas, double a, double b, double ei) {
    if (!(a > 0.0) || !(b > 0.0)) throw std::invalid_argument("force_from_deflection: a and b must be > 0");
    // d(a, F) = F·k(a, b)/(6·EI), with k the branch geometry at the sensor.
    const double k = a <= b ? a * a * (3.0 * b - a) : b * b * (3.0 * a - b);
    return d_meas * 6.0 * ei / k;
}

double measure_blocked_force(std::span<const TraceSample> trace, const CantileverSpec& spec,
                             AveragingWindow window) {
    if (trace.empty() || trace.back().t < window.end)
        throw std::invalid_argument("measure_blocked_force: trace shorter than the averaging window");
    const double ei = spec.ei();

    double integral = 0.0;
    const TraceSample* prev = nullptr;
    double first_t = 0.0;
    double last_t = 0.0;
    for (const auto& s : trace) {
        if (s.t < window.start || s.t > window.end) continue;
        if (prev == nullptr) {
            first_t = s.t;
        } else {
            const double fa = force_from_deflection(prev->d, spec.sensor_point, spec.contact_point, ei);
            const double fb = force_from_deflection(s.d, spec.sensor_point, spec.contact_point, ei);
            integral += 0.5 * (fa + fb) * (s.t - prev->t);
        }
        last_t = s.t;
        prev = &s;
    }
    if (prev == nullptr) throw std::invalid_argument("measure_blocked_force: no samples inside the window");
    if (last_t == first_t) return force_from_deflection(prev->d, spec.sensor_point, spec.contact_point, ei);
    return integral / (last_t - first_t);
}

std::vector<TraceSample> read_trace_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::vector<TraceSample> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#' || line[0] == 't') continue;
        std::istringstream ss(line);
        TraceSample s;
        char comma = 0;
        if (!(ss >> s.t >> comma >> s.d) || comma != ',')
            throw std::runtime_error(path.string() + ": malformed trace row '" + line + "'");
        out.push_back(s);
    }
    return out;
}

void write_trace_csv(const std::filesystem::path& path, std::span<const TraceSample> trace) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "t,d\n" << std::setprecision(17);
    for (const auto& s : trace) out << s.t << ',' << s.d << '\n';
}

}  // namespace flatswim::cantilever
