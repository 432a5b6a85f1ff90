#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

namespace cdm {

/// Shortest decimal string that round-trips the double (locale-independent).
std::string format_double(double value);

std::uint64_t fnv1a64_bytes(const void* data, std::size_t size);
std::uint64_t fnv1a64_file(const std::filesystem::path& path);

} // namespace cdm
