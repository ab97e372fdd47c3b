#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace pairspec::cli {

/// Provenance record written next to every command's artifacts. Identical
/// command, digest and seed imply byte-identical data files; the duration
/// is informational only.
struct RunManifest {
    std::string command;
    std::string config_digest;
    std::uint64_t master_seed = 0;
    std::vector<std::string> artifacts;
    double duration_seconds = 0.0;
};

void write_manifest(const RunManifest& manifest,
                    const std::filesystem::path& out_dir);

}  // namespace pairspec::cli
