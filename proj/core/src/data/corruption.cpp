#include "hcn/data/corruption.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>

#include "hcn/util/rng.hpp"

namespace hcn::data {

namespace {

constexpr std::array<std::pair<std::string_view, CorruptionKind>, 6> kNames{{
    {"noise", CorruptionKind::Noise},
    {"border", CorruptionKind::Border},
    {"patches", CorruptionKind::Patches},
    {"grid", CorruptionKind::Grid},
    {"line_clutter", CorruptionKind::LineClutter},
    {"deletion", CorruptionKind::Deletion},
}};

void fill_block(model::BinaryTensor3& img, std::size_t size, bool value, Rng& rng) {
  const std::size_t bh = std::min(size, img.rows()), bw = std::min(size, img.cols());
  const std::size_t r0 = rng.below(img.rows() - bh + 1), c0 = rng.below(img.cols() - bw + 1);
  for (std::size_t f = 0; f < img.features(); ++f)
    for (std::size_t r = r0; r < r0 + bh; ++r)
      for (std::size_t c = c0; c < c0 + bw; ++c) img.set(f, r, c, value);
}

}  // namespace

CorruptionKind parse_corruption(std::string_view name) {
  for (const auto& [n, k] : kNames)
    if (n == name) return k;
  throw std::invalid_argument("unknown corruption '" + std::string(name) + "'");
}

std::string corruption_name(CorruptionKind kind) {
  for (const auto& [n, k] : kNames)
    if (k == kind) return std::string(n);
  throw std::invalid_argument("unknown corruption kind");
}

model::BinaryTensor3 corrupt(const model::BinaryTensor3& image, CorruptionKind kind, std::uint64_t seed,
                             const CorruptionParams& params) {
  Rng rng(seed);
  model::BinaryTensor3 out = image;
  const std::size_t h = image.rows(), w = image.cols();
  switch (kind) {
    case CorruptionKind::Noise:
      if (params.noise_rate < 0.0 || params.noise_rate > 1.0) throw std::invalid_argument("noise rate outside [0, 1]");
      for (std::size_t i = 0; i < out.size(); ++i)
        if (rng.bernoulli(params.noise_rate)) out.set(i, !out.at(i));
      break;
    case CorruptionKind::Border:
      for (std::size_t f = 0; f < out.features(); ++f)
        for (std::size_t r = 0; r < h; ++r)
          for (std::size_t c = 0; c < w; ++c) {
            const std::size_t b = params.border_width;
            if (r < b || c < b || r + b >= h || c + b >= w) out.set(f, r, c, true);
          }
      break;
    case CorruptionKind::Patches:
      for (std::size_t k = 0; k < params.patch_count; ++k) fill_block(out, params.patch_size, true, rng);
      break;
    case CorruptionKind::Deletion:
      for (std::size_t k = 0; k < params.patch_count; ++k) fill_block(out, params.patch_size, false, rng);
      break;
    case CorruptionKind::Grid:
      if (params.grid_step == 0) throw std::invalid_argument("grid step must be positive");
      for (std::size_t f = 0; f < out.features(); ++f)
        for (std::size_t r = 0; r < h; ++r)
          for (std::size_t c = 0; c < w; ++c)
            if (r % params.grid_step == 0 || c % params.grid_step == 0) out.set(f, r, c, true);
      break;
    case CorruptionKind::LineClutter:
      for (std::size_t k = 0; k < params.line_count; ++k) {
        const bool horizontal = rng.bernoulli(0.5);
        const std::size_t at = rng.below(horizontal ? h : w);
        for (std::size_t f = 0; f < out.features(); ++f)
          for (std::size_t i = 0; i < (horizontal ? w : h); ++i)
            horizontal ? out.set(f, at, i, true) : out.set(f, i, at, true);
      }
      break;
  }
  return out;
}

}  // namespace hcn::data
