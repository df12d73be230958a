#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

namespace wrw::cli {

inline constexpr const char* kToolVersion = "0.1.0";

/// Reproducibility record attached to every emitted report. The data payload
/// of a run is a pure function of the recorded parameters and seed;
/// wall_time_seconds is informational only.
struct RunManifest {
    std::string subcommand;
    std::map<std::string, std::string> params;
    std::uint64_t seed = 0;
    std::string tool_version = kToolVersion;
    double wall_time_seconds = 0.0;
};

nlohmann::json manifest_json(const RunManifest& manifest);

/// Round-trip-safe decimal rendering (17 significant digits).
std::string format_double(double v);

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

std::string to_csv(const Table& table);

/// Writes the report. kind is "csv" or "json". CSV with an out-file gets a
/// sidecar <file>.manifest.json; JSON embeds the manifest.
void emit_report(const Table& table, const nlohmann::json& data, const RunManifest& manifest,
                 const std::string& kind, const std::string& out_file);

}  // namespace wrw::cli
