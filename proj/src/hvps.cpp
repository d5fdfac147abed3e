#include "flatswim/hvps.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "flatswim/actuator.hpp"
#include "flatswim/data.hpp"

namespace flatswim::hvps {

void ConverterConfig::validate() const {
    constexpr double eps = 1e-12;
    if (pulse_width < 1e-6 - eps || pulse_width > 3e-6 + eps)
        throw std::invalid_argument("converter config: pulse_width must be within 1-3 us");
    if (switching_frequency < 1e3 || switching_frequency > 20e3)
        throw std::invalid_argument("converter config: switching_frequency must be within 1-20 kHz");
    if (!(input_voltage > 0.0)) throw std::invalid_argument("converter config: input_voltage must be > 0");
}

OutputMap::OutputMap(std::vector<double> pulse_widths, std::vector<double> switching_frequencies,
                     std::array<std::vector<double>, kMaxChannels + 1> grids, double reference_f_act,
                     double reference_input_voltage, double max_load_scale)
    : pulse_widths_(std::move(pulse_widths)),
      switching_frequencies_(std::move(switching_frequencies)),
      grids_(std::move(grids)),
      reference_f_act_(reference_f_act),
      reference_input_voltage_(reference_input_voltage),
      max_load_scale_(max_load_scale) {
    const auto increasing = [](const std::vector<double>& v) {
        return v.size() >= 2 && std::adjacent_find(v.begin(), v.end(), std::greater_equal<>()) == v.end();
    };
    if (!increasing(pulse_widths_) || !increasing(switching_frequencies_))
        throw std::invalid_argument("output map: axes need >= 2 strictly increasing nodes");
    const std::size_t n = pulse_widths_.size() * switching_frequencies_.size();
    for (const auto& g : grids_)
        if (g.size() != n) throw std::invalid_argument("output map: grid size does not match axes");
    for (std::size_t i = 0; i < n; ++i)
        for (int c = 1; c <= kMaxChannels; ++c)
            if (grids_[c][i] > grids_[c - 1][i])
                throw std::invalid_argument("output map: loaded voltage exceeds the lighter-load voltage");
    if (!(reference_f_act_ > 0.0) || !(reference_input_voltage_ > 0.0) || !(max_load_scale_ >= 1.0))
        throw std::invalid_argument("output map: invalid reference parameters");
}

OutputMap OutputMap::from_json(const nlohmann::json& j) {
    std::vector<double> pw;
    for (const auto& v : j.at("pulse_width_us")) pw.push_back(v.get<double>() * 1e-6);
    std::vector<double> fs;
    for (const auto& v : j.at("switching_frequency_khz")) fs.push_back(v.get<double>() * 1e3);
    std::array<std::vector<double>, kMaxChannels + 1> grids;
    const char* names[] = {"no_load", "one_channel", "two_channels"};
    for (int c = 0; c <= kMaxChannels; ++c)
        for (const auto& row : j.at("grids").at(names[c]))
            for (const auto& v : row) grids[c].push_back(v.get<double>());
    return OutputMap(std::move(pw), std::move(fs), std::move(grids), j.value("reference_f_act", 30.0),
                     j.value("reference_input_voltage", 3.9), j.value("max_load_scale", 3.0));
}

OutputMap OutputMap::load(const std::filesystem::path& path) { return from_json(read_json(path)); }

const OutputMap& OutputMap::bundled() {
    static const OutputMap map = load(data_dir() / "hvps_output_map.json");
    return map;
}

namespace {

// Index of the cell containing v and the interpolation weight; v is clamped to the axis.
std::pair<std::size_t, double> locate(const std::vector<double>& axis, double v) {
    // Unit conversions (µs, kHz) leave inputs an ulp or two off the nodes.
    for (std::size_t i = 0; i < axis.size(); ++i) {
        if (std::abs(v - axis[i]) <= 1e-9 * std::abs(axis[i]))
            return i + 1 < axis.size() ? std::pair{i, 0.0} : std::pair{i - 1, 1.0};
    }
    if (v <= axis.front()) return {0, 0.0};
    if (v >= axis.back()) return {axis.size() - 2, 1.0};
    const auto hi = std::upper_bound(axis.begin(), axis.end(), v);
    const auto i = static_cast<std::size_t>(hi - axis.begin()) - 1;
    return {i, (v - axis[i]) / (axis[i + 1] - axis[i])};
}

}  // namespace

double OutputMap::grid_value(int channels, double pulse_width, double switching_frequency) const {
    const auto& g = grids_[static_cast<std::size_t>(channels)];
    const std::size_t nf = switching_frequencies_.size();
    const auto [i, tx] = locate(pulse_widths_, pulse_width);
    const auto [k, ty] = locate(switching_frequencies_, switching_frequency);
    const auto at = [&](std::size_t a, std::size_t b) { return g[a * nf + b]; };
    // Written so that a weight of exactly 0 or 1 reproduces the node value.
    const double lo = tx == 0.0 ? at(i, k) : tx == 1.0 ? at(i + 1, k) : (1.0 - tx) * at(i, k) + tx * at(i + 1, k);
    const double hi = tx == 0.0   ? at(i, k + 1)
                      : tx == 1.0 ? at(i + 1, k + 1)
                                  : (1.0 - tx) * at(i, k + 1) + tx * at(i + 1, k + 1);
    return ty == 0.0 ? lo : ty == 1.0 ? hi : (1.0 - ty) * lo + ty * hi;
}

double OutputMap::output_voltage(const ConverterConfig& cfg, int active_channels, double f_act) const {
    cfg.validate();
    if (active_channels < 0 || active_channels > kMaxChannels)
        throw std::invalid_argument("output_voltage: active_channels must be 0, 1 or 2");
    if (f_act < 0.0) throw std::invalid_argument("output_voltage: f_act must be >= 0");

    const double unloaded = grid_value(0, cfg.pulse_width, cfg.switching_frequency);
    double v = unloaded;
    if (active_channels > 0) {
        const double loaded = grid_value(active_channels, cfg.pulse_width, cfg.switching_frequency);
        const double load = std::min(f_act / reference_f_act_, max_load_scale_);
        v = load == 1.0 ? loaded : unloaded + (loaded - unloaded) * load;
    }
    if (cfg.input_voltage != reference_input_voltage_) v *= cfg.input_voltage / reference_input_voltage_;
    return std::max(0.0, v);
}

double output_voltage(const ConverterConfig& cfg, int active_channels, double f_act) {
    return OutputMap::bundled().output_voltage(cfg, active_channels, f_act);
}

void PowerState::validate() const {
    if (active_channels < 0 || active_channels > OutputMap::kMaxChannels)
        throw std::invalid_argument("power state: active_channels must be 0, 1 or 2");
    if (mode == PowerMode::Driving && active_channels < 1)
        throw std::invalid_argument("power state: driving requires at least one active channel");
    if (f_act < 0.0) throw std::invalid_argument("power state: f_act must be >= 0");
}

double system_power(const PowerState& state, const PowerBudget& budget) {
    state.validate();
    double mW = 0.0;
    switch (state.mode) {
        case PowerMode::Idle: mW = budget.idle_mW; break;
        case PowerMode::ConverterOn: mW = budget.converter_on_mW; break;
        case PowerMode::Driving:
            mW = budget.converter_on_mW + budget.actuator_increment_mW * state.active_channels * state.f_act /
                                              (2.0 * budget.reference_f_act);
            break;
    }
    return mW / 1000.0;
}

double battery_endurance(double capacity_mAh, double nominal_voltage, const PowerState& state,
                         const PowerBudget& budget) {
    if (!(capacity_mAh > 0.0)) throw std::invalid_argument("battery_endurance: capacity must be > 0");
    const double energy_J = capacity_mAh * 3.6 * nominal_voltage;
    return energy_J / system_power(state, budget);
}

double bridge_output(double t, const ConverterConfig& cfg, double f_sig, int channel, unsigned active_mask,
                     const OutputMap& map) {
    if (channel < 0 || channel >= OutputMap::kMaxChannels || (active_mask & (1u << channel)) == 0)
        throw std::invalid_argument("bridge_output: channel is not active");
    const double f_act = actuator::actuation_frequency({actuator::Waveform::BipolarSquare, 0.0, f_sig});
    const double amplitude = map.output_voltage(cfg, std::popcount(active_mask & 0b11u), f_act);
    const double cycle = t * f_sig;
    return cycle - std::floor(cycle) < 0.5 ? amplitude : -amplitude;
}

}  // namespace flatswim::hvps
