#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "hcn/model/architecture.hpp"
#include "hcn/model/hcn_graph.hpp"
#include "hcn/model/tensor.hpp"
#include "hcn/util/rng.hpp"

namespace hcn::learn {

using model::Architecture;
using model::BinaryTensor3;
using model::BinaryTensor4;
using model::Hyperparams;

/// Binary weights of every layer (index l, entry 0 empty) plus the settings that produced them.
struct TrainedModel {
  Architecture arch;
  Hyperparams hyper;
  std::vector<BinaryTensor4> weights;

  friend bool operator==(const TrainedModel&, const TrainedModel&) = default;
};

/// All-zero weights with the architecture's shapes.
TrainedModel empty_model(const Architecture& arch, const Hyperparams& hyper);

using Labels = std::vector<std::optional<std::size_t>>;

/// What a run produced besides the weights.
struct LearnReport {
  std::vector<double> deltas;  // largest message change of each epoch
  int epochs_run = 0;
  bool converged = false;
};

struct LearnState {
  model::HcnGraph net;
  Hyperparams hyper;
  Rng rng;  // schedule order and weight-prior draws
  int epoch = 0;
  LearnReport report;
};

/// Generator behind a run's weight-prior draws and schedule order.
Rng schedule_rng(const Hyperparams& hyper);

/// Initial weight prior log-odds, each drawn from p ~ U(0.9 pW, pW); index l, entry 0 empty.
std::vector<std::vector<double>> draw_weight_priors(const Architecture& arch, const Hyperparams& hyper, Rng& rng);

/// Builds the graph for `images` and sets Algorithm 1's initial messages:
/// bottom-up and weight-bound messages 0, top-down messages -inf, random weight
/// priors, and the pixel evidence (masked pixels, mask bit 0, get none).
/// `weight_priors` overrides the random draw (online learning).
LearnState init_messages(const Architecture& arch, const Hyperparams& hyper, std::span<const BinaryTensor3> images,
                         const Labels& labels = {}, std::span<const BinaryTensor3> masks = {},
                         const std::vector<std::vector<double>>* weight_priors = nullptr);

/// Per layer 1..L: OR -> U, POOL -> R (damped), AND-OR trees -> W and S in
/// random order; then the class trees. Returns the largest message change.
double forward_pass(LearnState& state);

/// Per layer L..1: AND-OR trees -> R in random order, POOL -> U, OR -> S^{l-1}.
/// `pool_rounds` > 0 replaces the POOL step by that many rounds of POOL -> U
/// followed by OR -> U, which lets neighbouring pools compete.
double backward_pass(LearnState& state, int pool_rounds = 0);

/// Every per-image factor once, each image's factors bottom-up, images interleaved at random.
double single_visit_pass(LearnState& state);

/// One epoch of the schedule selected in the hyperparameters.
double run_epoch(LearnState& state);

/// W = 1 where the weight belief is strictly positive.
TrainedModel binarize_weights(const LearnState& state);

struct LearnResult {
  TrainedModel model;
  LearnReport report;
  LearnState state;
};

/// Runs epochs until the sup-norm message change drops below the tolerance or
/// the epoch limit is reached.
LearnResult learn_batch(std::span<const BinaryTensor3> images, const Labels& labels, const Architecture& arch,
                        const Hyperparams& hyper);

}  // namespace hcn::learn
