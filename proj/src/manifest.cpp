#include "tokenprune/manifest.hpp"

#include <chrono>
#include <ctime>
#include <fstream>

#include <json.hpp>

#include "tokenprune/errors.hpp"

namespace tokenprune {

std::string utc_timestamp_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm utc{};
    gmtime_r(&t, &utc);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &utc);
    return buf;
}

void save_manifest(const RunManifest& manifest, const std::filesystem::path& path) {
    nlohmann::json doc;
    doc["tool"] = manifest.tool;
    doc["version"] = manifest.version;
    doc["command"] = manifest.command;
    doc["timestamp"] = manifest.timestamp;
    doc["argv"] = manifest.argv;
    doc["inputs"] = manifest.inputs;
    doc["outputs"] = manifest.outputs;
    if (manifest.seed) {
        doc["seed"] = *manifest.seed;
    } else {
        doc["seed"] = nullptr;
    }

    std::ofstream out(path, std::ios::trunc);
    if (!out) throw UnwritablePathError("cannot write " + path.string());
    out << doc.dump(2) << "\n";
    out.flush();
    if (!out) throw UnwritablePathError("write failed for " + path.string());
}

RunManifest load_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw FileNotFoundError("cannot open " + path.string());
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("manifest JSON parse error: " + std::string(e.what()));
    }

    RunManifest m;
    try {
        m.tool = doc.at("tool").get<std::string>();
        m.version = doc.at("version").get<std::string>();
        m.command = doc.at("command").get<std::string>();
        m.timestamp = doc.at("timestamp").get<std::string>();
        m.argv = doc.at("argv").get<std::vector<std::string>>();
        m.inputs = doc.at("inputs").get<std::map<std::string, std::string>>();
        m.outputs = doc.at("outputs").get<std::map<std::string, std::string>>();
        if (!doc.at("seed").is_null()) m.seed = doc.at("seed").get<std::uint64_t>();
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("manifest JSON missing field: " + std::string(e.what()));
    }
    return m;
}

}  // namespace tokenprune
