#pragma once

#include <cstdint>
#include <string>

namespace pairspec::cli {

/// Shortest decimal representation that parses back to the same double
/// (std::to_chars). Keeps CSV output byte-stable across reruns.
std::string format_double(double value);

std::string format_uint(std::uint64_t value);

}  // namespace pairspec::cli
