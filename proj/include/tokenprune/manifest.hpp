#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace tokenprune {

// Provenance record written next to every command's outputs. `argv` holds
// the fully resolved subcommand invocation (defaults expanded), which is
// what `rerun` replays; the timestamp is informational and excluded from
// reproducibility comparisons.
struct RunManifest {
    std::string tool;
    std::string version;
    std::string command;
    std::string timestamp;
    std::vector<std::string> argv;
    std::map<std::string, std::string> inputs;
    std::map<std::string, std::string> outputs;
    std::optional<std::uint64_t> seed;
};

std::string utc_timestamp_now();

void save_manifest(const RunManifest& manifest, const std::filesystem::path& path);
RunManifest load_manifest(const std::filesystem::path& path);

}  // namespace tokenprune
