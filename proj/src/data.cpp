#include "flatswim/data.hpp"

#include <cstdlib>
#include <fstream>
#include <stdexcept>

namespace flatswim {

std::filesystem::path data_dir() {
    if (const char* env = std::getenv("FLATSWIM_DATA_DIR"); env != nullptr && *env != '\0') return env;
    return FLATSWIM_DEFAULT_DATA_DIR;
}

nlohmann::json read_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    try {
        return nlohmann::json::parse(in, nullptr, true, /*ignore_comments=*/true);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::runtime_error(path.string() + ": " + e.what());
    }
}

}  // namespace flatswim
