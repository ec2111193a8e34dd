#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "rill/learner/mlp.hpp"

namespace rill::learner {

inline constexpr std::uint32_t kCheckpointVersion = 1;

/// 64-bit FNV-1a, used to tie a checkpoint to the config text that produced it.
std::uint64_t config_hash(std::string_view config_text);

/// Layout: "RILLCKPT", u32 version, u64 config hash, the MLPSpec (input
/// dim, hidden widths, heads with names), then every parameter in
/// MLP::parameters() order as little-endian IEEE-754 doubles. All integers
/// are little-endian.
void save_checkpoint(const std::string& path, const MLP& model, std::uint64_t hash);

struct Checkpoint {
  MLP model;
  std::uint64_t config_hash = 0;
};

/// Throws FormatError on a bad magic, unknown version or truncation and
/// ConfigError if the file cannot be opened.
Checkpoint load_checkpoint(const std::string& path);

}  // namespace rill::learner
