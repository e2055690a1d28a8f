#pragma once

#include <span>
#include <vector>

#include "hcn/learn/learner.hpp"

namespace hcn::learn {

struct OnlineResult {
  TrainedModel model;
  std::vector<std::vector<double>> weight_beliefs;  // last posterior, index l
  LearnReport report;                               // deltas: largest change over each epoch's minibatches
};

/// Streams the images in minibatches of hyper.minibatch, `hyper.epochs` times.
/// Each minibatch gets a fresh graph whose weight priors carry the previous
/// posterior, mixed back towards the initial draw with forgetting factor
/// hyper.lambda; every factor is visited once. The per-image messages are
/// dropped after each minibatch.
OnlineResult learn_online(std::span<const BinaryTensor3> images, const Labels& labels, const Architecture& arch,
                          const Hyperparams& hyper);

}  // namespace hcn::learn
