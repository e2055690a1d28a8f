#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "hcn/model/tensor.hpp"

namespace hcn::data {

enum class CorruptionKind { Noise, Border, Patches, Grid, LineClutter, Deletion };

struct CorruptionParams {
  double noise_rate = 0.1;       // Noise: flip probability per pixel
  std::size_t border_width = 2;  // Border: frame thickness
  std::size_t patch_count = 3;   // Patches / Deletion: number of blocks
  std::size_t patch_size = 6;    // Patches / Deletion: block side
  std::size_t grid_step = 5;     // Grid: spacing of the overlaid lines
  std::size_t line_count = 4;    // LineClutter: full-length random lines
};

/// Parses "noise", "border", "patches", "grid", "line_clutter" or "deletion".
CorruptionKind parse_corruption(std::string_view name);
std::string corruption_name(CorruptionKind kind);

/// Applies the corruption to every channel of the image.
model::BinaryTensor3 corrupt(const model::BinaryTensor3& image, CorruptionKind kind, std::uint64_t seed,
                             const CorruptionParams& params = {});

}  // namespace hcn::data
