#include "flatswim/comparison.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "flatswim/data.hpp"

namespace flatswim::comparison {

namespace {

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    bool quoted = false;
    for (const char c : line) {
        if (c == '"') quoted = !quoted;
        else if (c == ',' && !quoted) out.push_back(std::exchange(cell, {}));
        else if (c != '\r') cell += c;
    }
    out.push_back(cell);
    return out;
}

std::optional<double> number(const std::string& s) {
    if (s.empty() || s == "-" || s == "N/A") return std::nullopt;
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument("comparison table: bad number '" + s + "'");
    return v;
}

bool qualifies(const ComparisonRow& r) { return r.maneuverable && r.rotation_speed && r.relative_speed > 0.0; }

}  // namespace

ComparisonRow make_row(std::string label, const std::vector<double>& dims_mm, double speed_cm_s,
                       std::optional<double> rotation_deg_s, bool maneuverable, bool this_work) {
    if (dims_mm.empty()) throw std::invalid_argument("comparison row '" + label + "': no dimensions");
    ComparisonRow r;
    r.label = std::move(label);
    r.characteristic_size = *std::max_element(dims_mm.begin(), dims_mm.end());
    if (!(r.characteristic_size > 0.0)) throw std::invalid_argument("comparison row '" + r.label + "': size must be > 0");
    r.speed = speed_cm_s;
    r.relative_speed = speed_cm_s * 10.0 / r.characteristic_size;
    r.rotation_speed = rotation_deg_s;
    r.maneuverable = maneuverable;
    r.this_work = this_work;
    return r;
}

std::vector<ComparisonRow> load_comparison_table(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error(path.string() + ": empty file");
    const auto header = split_csv(line);
    std::map<std::string, std::size_t> col;
    for (std::size_t i = 0; i < header.size(); ++i) col[header[i]] = i;
    for (const char* name : {"label", "length_mm", "width_mm", "height_mm", "speed_cm_s", "maneuverable",
                             "rotation_deg_s", "this_work"})
        if (!col.count(name)) throw std::runtime_error(path.string() + ": missing column " + name);

    std::vector<ComparisonRow> rows;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        const auto cells = split_csv(line);
        if (cells.size() != header.size()) throw std::runtime_error(path.string() + ": ragged row '" + line + "'");
        std::vector<double> dims;
        for (const char* d : {"length_mm", "width_mm", "height_mm"})
            if (const auto v = number(cells[col[d]])) dims.push_back(*v);
        const auto speed = number(cells[col["speed_cm_s"]]);
        if (!speed) continue;
        const std::string& m = cells[col["maneuverable"]];
        rows.push_back(make_row(cells[col["label"]], dims, *speed, number(cells[col["rotation_deg_s"]]),
                                m == "yes" || m == "partial", cells[col["this_work"]] == "1"));
    }
    return rows;
}

const std::vector<ComparisonRow>& bundled_table() {
    static const auto rows = load_comparison_table(data_dir() / "comparison_table.csv");
    return rows;
}

double comparison_fit(const std::vector<ComparisonRow>& rows) {
    double num = 0.0;
    double den = 0.0;
    for (const auto& r : rows) {
        if (!qualifies(r)) continue;
        num += *r.rotation_speed * r.relative_speed;
        den += r.relative_speed * r.relative_speed;
    }
    if (!(den > 0.0)) throw std::invalid_argument("comparison_fit: no maneuverable rows with a rotation speed");
    return num / den;
}

FitSensitivity fit_sensitivity(const std::vector<ComparisonRow>& rows) {
    std::vector<ComparisonRow> others;
    FitSensitivity s;
    for (const auto& r : rows) {
        if (qualifies(r)) ++s.rows_used;
        if (!r.this_work) {
            others.push_back(r);
            if (qualifies(r)) ++s.rows_used_excluding;
        }
    }
    s.all_rows = comparison_fit(rows);
    s.excluding_this_work = comparison_fit(others);
    return s;
}

}  // namespace flatswim::comparison
