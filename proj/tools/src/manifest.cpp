#include "manifest.hpp"

#include <fstream>

#include <json.hpp>

#include "pairspec/errors.hpp"

namespace pairspec::cli {

void write_manifest(const RunManifest& manifest,
                    const std::filesystem::path& out_dir) {
    const nlohmann::json doc = {
        {"command", manifest.command},
        {"config_digest", manifest.config_digest},
        {"master_seed", manifest.master_seed},
        {"artifacts", manifest.artifacts},
        {"duration_seconds", manifest.duration_seconds},
    };
    const auto path = out_dir / "manifest.json";
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot write manifest: " + path.string());
    }
    out << doc.dump(2) << '\n';
}

}  // namespace pairspec::cli
