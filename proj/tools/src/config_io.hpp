#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pairspec/analysis.hpp"
#include "pairspec/experiment.hpp"

namespace pairspec::cli {

/// Scan-command settings (the "scan" config section).
struct ScanSettings {
    std::vector<double> temperatures_c;
    std::uint64_t batch_size = 100;
};

/// Resolve-command settings: the integration-time sweep is a fine region
/// in small steps followed by a coarse region, in milliseconds.
struct ResolveSettings {
    double fine_start_ms = 1.0;
    double fine_stop_ms = 20.0;
    double fine_step_ms = 1.0;
    double coarse_stop_ms = 100.0;
    double coarse_step_ms = 5.0;
    std::uint64_t estimates_per_increment = 800;
    std::vector<int> ks = {2, 3, 4};
    ErrorCombination combination = ErrorCombination::max_fit;

    std::vector<double> increments_ms() const;
};

/// A fully resolved configuration: the experiment plus per-command
/// settings, the canonical resolved document, and its content digest.
struct LoadedConfig {
    ExperimentConfig experiment;
    ScanSettings scan;
    ResolveSettings resolve;
    nlohmann::json resolved;
    std::string digest;
};

/// Parses a JSON configuration document. Relative file references
/// (calibration_file, sample file) resolve against the config's directory.
/// An optional seed override replaces master_seed before the digest is
/// computed, so the digest always reflects what actually ran.
LoadedConfig load_config(const std::filesystem::path& path,
                         std::optional<std::uint64_t> seed_override);

/// FNV-1a 64-bit hex digest.
std::string fnv1a64_hex(std::string_view data);

}  // namespace pairspec::cli
