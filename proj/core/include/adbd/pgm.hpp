#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "adbd/field.hpp"

namespace adbd {

// Binary portable graymap (P5, maxval 255). Pixel v in [-1, 1] maps to
// floor((v + 1) * 127.5 + 0.5); loading maps byte b back to b / 127.5 - 1.
std::vector<std::uint8_t> encode_pgm(const Field& image);
Field decode_pgm(const std::vector<std::uint8_t>& bytes);

void save_pgm(const Field& image, const std::filesystem::path& path);
Field load_pgm(const std::filesystem::path& path);

}  // namespace adbd
