#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "hcn/data/dataset.hpp"
#include "hcn/model/architecture.hpp"

namespace hcn::data {

/// Draws from the generative model: W ~ Bernoulli(pW) unless `weights` is given,
/// a top sparsification (Bernoulli(pS), or one template of a uniformly drawn
/// class), then per layer bconv followed by a uniform in-bounds shift of every
/// active unit, and finally the noisy channel.
Dataset sample_hcn(const model::Architecture& arch, const model::Hyperparams& hyper, std::size_t n,
                   std::uint64_t seed, const std::vector<BinaryTensor4>* weights = nullptr);

/// sample_hcn restricted to one layer without a class layer.
Dataset sample_single_layer(const model::Architecture& arch, const model::Hyperparams& hyper, std::size_t n,
                            std::uint64_t seed);

/// Flips 1 -> 0 with probability p01 and 0 -> 1 with probability p10.
BinaryTensor3 noisy_channel(const BinaryTensor3& clean, double p01, double p10, Rng& rng);

/// Moves every active element to a uniformly drawn in-bounds shift of the
/// centred pool window and ORs the results.
BinaryTensor3 pool_shift(const BinaryTensor3& r, std::size_t pool_h, std::size_t pool_w, Rng& rng);

/// Pastes `glyph` (rows of '#' and '.') into channel 0 of `img` at (r, c) by OR.
void stamp(BinaryTensor3& img, const std::vector<std::string>& glyph, std::size_t r, std::size_t c);

/// A weight tensor with one 1-channel feature per glyph, all glyphs h x w.
BinaryTensor4 glyph_weights(std::span<const std::vector<std::string>> glyphs);

/// Places `count` copies of glyphs drawn uniformly from `glyphs` at random
/// positions of an h x w canvas so that their boxes (plus `gap` pixels) do not
/// overlap. Gives up on a placement after many failed attempts.
struct Placement {
  std::size_t glyph, row, col;
};
std::vector<Placement> scatter(std::size_t h, std::size_t w, std::size_t glyph_h, std::size_t glyph_w,
                               std::size_t n_glyphs, std::size_t count, std::size_t gap, Rng& rng);

// Single-image and small datasets of the single-layer experiments.
Dataset two_bars(std::uint64_t seed);
Dataset symbols(std::uint64_t seed);
Dataset text_lines(std::uint64_t seed);
/// Many 24x24 images, each with `letters` random non-overlapping characters, then `flip` noise.
Dataset letter_stream(std::size_t n, std::size_t letters, std::uint64_t seed, double flip = 0.03);
/// Four random 5x5 features planted into 20x20 images with about 8 placements each; 3% flips.
Dataset planted_features(std::size_t n, std::uint64_t seed);

}  // namespace hcn::data
