#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "hcn/data/compression.hpp"
#include "hcn/learn/learner.hpp"
#include "hcn/model/tensor.hpp"

namespace hcn::infer {

using learn::TrainedModel;
using model::BinaryTensor3;
using model::BinaryTensor4;
using model::RealTensor3;

/// Bottom-up scores of one image.
struct ClassScores {
  std::vector<double> templates;  // k * J + j
  std::vector<double> classes;    // max over the class's templates
  std::size_t label = 0;
  std::size_t template_id = 0;
};

/// Index of the largest value; values within a relative 1e-9 of the maximum
/// tie and the lowest index wins.
std::size_t tolerant_argmax(std::span<const double> values);

/// Forward pass by message passing over a graph with the weights clamped.
/// Reuses one graph across calls; not thread-safe.
class ForwardClassifier {
 public:
  explicit ForwardClassifier(const TrainedModel& model);
  ClassScores operator()(const BinaryTensor3& image);

 private:
  learn::LearnState state_;
  model::ChannelConstants channel_;
};

ClassScores classify_forward(const BinaryTensor3& image, const TrainedModel& model);

/// The same forward pass evaluated directly: per layer max-pooling of the
/// scores below (minus log pool size) followed by a linear convolution with W.
ClassScores classify_direct(const BinaryTensor3& image, const TrainedModel& model);

/// Worker count from HCN_THREADS, else the hardware concurrency.
std::size_t inference_threads();

/// classify_forward over many images on inference_threads() workers.
std::vector<ClassScores> classify_batch(std::span<const BinaryTensor3> images, const TrainedModel& model,
                                        std::size_t threads = 0);

inline constexpr int kInpaintRounds = 10;

/// Fills the pixels with mask bit 0; observed pixels are returned unchanged.
/// One forward pass, then a backward pass whose pooling step is repeated
/// `rounds` times against the ORs below.
BinaryTensor3 inpaint(const BinaryTensor3& image, const BinaryTensor3& mask, const TrainedModel& model,
                      std::optional<std::size_t> label = std::nullopt, int rounds = kInpaintRounds);

/// bconv of the thresholded sparsification beliefs (> 0 in log-odds).
BinaryTensor3 reconstruct(const RealTensor3& s_beliefs, const BinaryTensor4& weights);
/// Same with weight beliefs, thresholded alike.
BinaryTensor3 reconstruct(const RealTensor3& s_beliefs, std::span<const double> w_beliefs, std::size_t a,
                          std::size_t f, std::size_t h, std::size_t w);

/// Renders a binary sparsification of layer `layer` down to the pixels with every pool centred.
BinaryTensor3 render_top_down(const BinaryTensor3& s, std::span<const BinaryTensor4> weights, std::size_t layer);

/// Pixel rendering of every feature of layer `layer`, one tile per feature.
std::vector<BinaryTensor3> feature_renderings(std::span<const BinaryTensor4> weights, std::size_t layer);

struct Sparsification {
  BinaryTensor3 s;
  std::vector<std::size_t> usage;  // active entries per feature
};

Sparsification extract_sparsification(const learn::LearnState& state, std::size_t image, std::size_t layer);

/// Active entries per feature over a set of sparsifications.
std::vector<std::size_t> feature_usage(std::span<const BinaryTensor3> s);

/// Compression of a single-layer model's encoding of `images`: thresholded S
/// beliefs of `state` (image n of the state is images[n]) and their bconv with `weights`.
data::Compression model_compression(std::span<const BinaryTensor3> images, const learn::LearnState& state,
                                    const BinaryTensor4& weights);

/// Infers the sparsifications of `images` under frozen weights by running
/// `epochs` epochs of the model's schedule.
learn::LearnState fit_sparsification(std::span<const BinaryTensor3> images, const TrainedModel& model, int epochs);

}  // namespace hcn::infer
