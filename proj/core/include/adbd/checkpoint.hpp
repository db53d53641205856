#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "adbd/mlp.hpp"

namespace adbd {

// Binary MLP checkpoint, little-endian throughout:
//
//   magic        8 bytes  "ADBDMLP\0"
//   version      u32      kCheckpointVersion
//   rank         u32      followed by `rank` u64 field dimensions
//   time_dim     u32
//   activation   u32      0 = silu, 1 = tanh
//   hidden_count u32      followed by `hidden_count` u64 widths
//   has_attn     u32      0 or 1; when 1 followed by u64 token_count,
//                         u64 heads, u64 windows, u32 priority (0 global, 1 local)
//   steps        u64      schedule length T used for t / T
//   param_count  u64      followed by `param_count` IEEE-754 f64 values
//
// Parameters follow the flat layout documented on MlpDenoiser.
inline constexpr std::uint32_t kCheckpointVersion = 1;

std::vector<std::uint8_t> encode_checkpoint(const MlpDenoiser& model);
MlpDenoiser decode_checkpoint(const std::vector<std::uint8_t>& bytes);

void save_checkpoint(const MlpDenoiser& model, const std::filesystem::path& path);
MlpDenoiser load_checkpoint(const std::filesystem::path& path);

}  // namespace adbd
