#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "jpegrdh/jpeg.hpp"

namespace jpegrdh {

/// Binary PGM (P5, maxval 255). Anything else is Error{UnsupportedFormat}.
PixelPlane parse_pgm(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> format_pgm(const PixelPlane& plane);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path,
                std::span<const std::uint8_t> bytes);

inline PixelPlane read_pgm(const std::filesystem::path& path) {
  return parse_pgm(read_file(path));
}

}  // namespace jpegrdh
