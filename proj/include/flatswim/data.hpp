#pragma once

#include <filesystem>

#include <json.hpp>

namespace flatswim {

/// Directory holding the bundled calibration tables and scenarios.
/// FLATSWIM_DATA_DIR in the environment overrides the build-time default.
std::filesystem::path data_dir();

/// Parses a JSON file, throwing std::runtime_error with the path on failure.
nlohmann::json read_json(const std::filesystem::path& path);

}  // namespace flatswim
