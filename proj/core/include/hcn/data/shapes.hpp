#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hcn/data/dataset.hpp"
#include "hcn/model/architecture.hpp"

namespace hcn::data {

// Two-layer synthetic data: a shape trait (square with four holes, or circle)
// combined with a diagonal trait ('/' or '\'). The class is the XOR of the two
// trait indices, so no single trait decides it. Template t = class * 2 + shape.
inline constexpr std::size_t kShapeTraits = 4;  // square, circle, '/', '\'
inline constexpr std::size_t kShapeClasses = 2;
inline constexpr std::size_t kShapeTemplatesPerClass = 2;
inline constexpr std::size_t kShapeTrait = 13;
inline constexpr std::size_t kShapeImage = kShapeTrait + 4;

struct ShapesOptions {
  double flip = 1e-3;
  bool jitter = true;  // 3x3 trait jitter and 3x3 pixel jitter
};

struct ShapesData {
  Dataset train;
  Dataset test;
};

/// 13x13 glyphs of the four traits; the two shapes have equal pixel counts, as do the diagonals.
const std::vector<std::vector<std::string>>& shape_traits();

/// 1x17x17 images; layer 1: 4 features 13x13 with 3x3 pooling; layer 2: 4 templates 5x5 with 3x3 pooling.
model::Architecture shapes_architecture(bool jitter = true);

/// Generating weights (index l) of shapes_architecture.
std::vector<model::BinaryTensor4> shapes_weights();

std::size_t shape_template(std::size_t shape, std::size_t diagonal);

ShapesData gen_shapes_dataset(std::size_t n_train, std::size_t n_test, std::uint64_t seed,
                              const ShapesOptions& options = {});

/// Template index of every image, read from the planted top sparsification.
std::vector<std::size_t> planted_templates(const Dataset& d);

}  // namespace hcn::data
