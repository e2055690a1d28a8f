#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hcn/learn/learner.hpp"
#include "hcn/model/tensor.hpp"

namespace hcn::data {

using model::BinaryTensor3;
using model::BinaryTensor4;

struct Dataset {
  std::string name;
  std::vector<BinaryTensor3> images;
  std::vector<std::size_t> labels;        // empty when unlabeled
  std::vector<BinaryTensor3> clean;       // noiseless images, empty when unknown
  std::vector<BinaryTensor4> planted;     // generating weights (index l), empty when unknown
  std::vector<BinaryTensor3> planted_top; // generating top sparsification per image, empty when unknown
  std::uint64_t seed = 0;

  std::size_t size() const { return images.size(); }
  bool labeled() const { return !labels.empty(); }
  /// Known labels as optional slots; empty when unlabeled.
  learn::Labels label_slots() const;
  /// Throws ShapeError when images differ in shape or side arrays do not match.
  void validate(std::size_t num_classes = 0) const;
  /// First `n` entries (all side arrays cut alike).
  Dataset head(std::size_t n) const;
};

}  // namespace hcn::data
