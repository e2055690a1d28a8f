#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "hcn/model/tensor.hpp"

namespace hcn::data {

/// H(p) in bits; H(0) = H(1) = 0.
double binary_entropy(double p);

/// N * H(ones / N) bits: the cost of an entropy-coded bit stream.
double encoding_cost(std::size_t ones, std::size_t total);
double encoding_cost(std::span<const std::uint8_t> bits);

struct Compression {
  double image_bits = 0.0;           // E(X)
  double sparsification_bits = 0.0;  // E(S)
  double weight_bits = 0.0;          // E(W)
  double error_bits = 0.0;           // E(X xor R)
  std::size_t used_features = 0;
  /// (E(S) + E(W) + E(X xor R)) / E(X) in percent, lower is better; +inf when E(X) = 0.
  double percent = 0.0;
};

/// Each quantity is one stream over all images. Features never used by any
/// sparsification are dropped from both S and W before counting.
Compression compression(std::span<const model::BinaryTensor3> images,
                        std::span<const model::BinaryTensor3> sparsifications, const model::BinaryTensor4& weights,
                        std::span<const model::BinaryTensor3> reconstructions);

double compression_ratio(std::span<const model::BinaryTensor3> images,
                         std::span<const model::BinaryTensor3> sparsifications, const model::BinaryTensor4& weights,
                         std::span<const model::BinaryTensor3> reconstructions);

}  // namespace hcn::data
