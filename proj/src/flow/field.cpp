#include "flatswim/flow/field.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>

namespace flatswim::flow {

FlowField::FlowField(std::size_t nx, std::size_t ny, double spacing, Vec2 origin)
    : nx_(nx), ny_(ny), spacing_(spacing), origin_(origin), data_(nx * ny) {
    if (nx == 0 || ny == 0) throw std::invalid_argument("flow field: grid must be non-empty");
    if (!(spacing > 0.0)) throw std::invalid_argument("flow field: spacing must be > 0");
}

Vec2 FlowField::node(std::size_t i, std::size_t j) const {
    return {origin_.x + static_cast<double>(i) * spacing_, origin_.y + static_cast<double>(j) * spacing_};
}

Vec2 FlowField::sample_grid(double gi, double gj) const {
    if (!(gi >= 0.0) || !(gj >= 0.0) || gi > static_cast<double>(nx_ - 1) || gj > static_cast<double>(ny_ - 1))
        return {};
    const auto i0 = std::min(static_cast<std::size_t>(gi), nx_ > 1 ? nx_ - 2 : 0);
    const auto j0 = std::min(static_cast<std::size_t>(gj), ny_ > 1 ? ny_ - 2 : 0);
    const double tx = nx_ > 1 ? gi - static_cast<double>(i0) : 0.0;
    const double ty = ny_ > 1 ? gj - static_cast<double>(j0) : 0.0;
    const std::size_t i1 = nx_ > 1 ? i0 + 1 : i0;
    const std::size_t j1 = ny_ > 1 ? j0 + 1 : j0;
    const Vec2 a = at(i0, j0) * (1.0 - tx) + at(i1, j0) * tx;
    const Vec2 b = at(i0, j1) * (1.0 - tx) + at(i1, j1) * tx;
    return a * (1.0 - ty) + b * ty;
}

Vec2 FlowField::sample(Vec2 p) const {
    return sample_grid((p.x - origin_.x) / spacing_, (p.y - origin_.y) / spacing_);
}

void FlowField::validate() const {
    if (nx_ == 0 || ny_ == 0 || data_.size() != nx_ * ny_) throw std::invalid_argument("flow field: empty grid");
    if (!(spacing_ > 0.0)) throw std::invalid_argument("flow field: spacing must be > 0");
    for (const auto& v : data_)
        if (!std::isfinite(v.x) || !std::isfinite(v.y))
            throw std::invalid_argument("flow field: non-finite velocity");
}

FlowField uniform_field(std::size_t nx, std::size_t ny, double spacing, Vec2 velocity, Vec2 origin) {
    FlowField f(nx, ny, spacing, origin);
    for (std::size_t j = 0; j < ny; ++j)
        for (std::size_t i = 0; i < nx; ++i) f.at(i, j) = velocity;
    return f;
}

double circulation(const FlowField& field, Vec2 center, double radius, std::size_t samples) {
    if (samples < 8 || !(radius > 0.0)) throw std::invalid_argument("circulation: need radius > 0 and >= 8 samples");
    const double dphi = 2.0 * std::numbers::pi / static_cast<double>(samples);
    double sum = 0.0;
    for (std::size_t k = 0; k < samples; ++k) {
        const double phi = static_cast<double>(k) * dphi;
        const Vec2 tangent{-std::sin(phi), std::cos(phi)};
        const Vec2 p = center + Vec2{std::cos(phi), std::sin(phi)} * radius;
        sum += dot(field.sample(p), tangent);
    }
    return sum * radius * dphi;
}

void write_field_csv(const std::filesystem::path& path, const FlowField& field) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "x,y,u,v\n" << std::setprecision(17);
    for (std::size_t j = 0; j < field.ny(); ++j)
        for (std::size_t i = 0; i < field.nx(); ++i) {
            const Vec2 p = field.node(i, j);
            const Vec2 v = field.at(i, j);
            out << p.x << ',' << p.y << ',' << v.x << ',' << v.y << '\n';
        }
}

FlowField read_field_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    struct Row { double x, y, u, v; };
    std::vector<Row> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#' || line[0] == 'x') continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ss(line);
        Row r{};
        if (!(ss >> r.x >> r.y >> r.u >> r.v)) throw std::runtime_error(path.string() + ": malformed row");
        rows.push_back(r);
    }
    if (rows.empty()) throw std::runtime_error(path.string() + ": no field rows");

    std::vector<double> xs;
    std::vector<double> ys;
    for (const auto& r : rows) {
        xs.push_back(r.x);
        ys.push_back(r.y);
    }
    const auto unique_sorted = [](std::vector<double>& v) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
    };
    unique_sorted(xs);
    unique_sorted(ys);
    if (xs.size() * ys.size() != rows.size()) throw std::runtime_error(path.string() + ": grid is not complete");
    double h = 1.0;
    if (xs.size() > 1) h = (xs.back() - xs.front()) / static_cast<double>(xs.size() - 1);
    else if (ys.size() > 1) h = (ys.back() - ys.front()) / static_cast<double>(ys.size() - 1);

    FlowField f(xs.size(), ys.size(), h, {xs.front(), ys.front()});
    for (const auto& r : rows) {
        const auto i = static_cast<std::size_t>(std::lower_bound(xs.begin(), xs.end(), r.x) - xs.begin());
        const auto j = static_cast<std::size_t>(std::lower_bound(ys.begin(), ys.end(), r.y) - ys.begin());
        f.at(i, j) = {r.u, r.v};
    }
    f.validate();
    return f;
}

}  // namespace flatswim::flow
