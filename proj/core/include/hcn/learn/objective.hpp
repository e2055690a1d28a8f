#pragma once

#include <span>

#include "hcn/model/architecture.hpp"
#include "hcn/model/tensor.hpp"

namespace hcn::learn {

/// log p(X, S, W) of the single-layer model (one layer, 1x1 pooling, no class
/// layer): Bernoulli priors on W and S plus the noisy channel on bconv(S, W).
/// Throws std::invalid_argument for other architectures.
double joint_log_prob(const model::Architecture& arch, const model::Hyperparams& hyper,
                      const model::BinaryTensor4& weights, std::span<const model::BinaryTensor3> sparsifications,
                      std::span<const model::BinaryTensor3> images);

}  // namespace hcn::learn
