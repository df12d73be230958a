#include "wrw/report.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <stdexcept>

namespace wrw::cli {

nlohmann::json manifest_json(const RunManifest& manifest) {
    nlohmann::json j;
    j["subcommand"] = manifest.subcommand;
    j["params"] = manifest.params;
    j["seed"] = manifest.seed;
    j["tool_version"] = manifest.tool_version;
    j["wall_time_seconds"] = manifest.wall_time_seconds;
    return j;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string to_csv(const Table& table) {
    std::string out;
    auto append_row = [&out](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out += ',';
            out += cells[i];
        }
        out += '\n';
    };
    append_row(table.header);
    for (const auto& row : table.rows) append_row(row);
    return out;
}

namespace {

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot open output file: " + path);
    out << text;
}

}  // namespace

void emit_report(const Table& table, const nlohmann::json& data, const RunManifest& manifest,
                 const std::string& kind, const std::string& out_file) {
    if (kind == "csv") {
        const std::string text = to_csv(table);
        if (out_file.empty()) {
            std::cout << text;
        } else {
            write_file(out_file, text);
            write_file(out_file + ".manifest.json", manifest_json(manifest).dump(2) + "\n");
        }
        return;
    }
    if (kind == "json") {
        nlohmann::json j;
        j["manifest"] = manifest_json(manifest);
        j["data"] = data;
        const std::string text = j.dump(2) + "\n";
        if (out_file.empty())
            std::cout << text;
        else
            write_file(out_file, text);
        return;
    }
    throw std::invalid_argument("unknown output kind: " + kind);
}

}  // namespace wrw::cli
