#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "hcn/model/bconv.hpp"

namespace hcn::model {

struct Dims3 {
  std::size_t features = 0;
  std::size_t rows = 0;
  std::size_t cols = 0;

  std::size_t size() const { return features * rows * cols; }
  friend bool operator==(const Dims3&, const Dims3&) = default;
};

/// One convolutional layer and the pooling layer right below it.
struct LayerSpec {
  std::size_t num_features = 1;
  std::size_t feat_h = 1;
  std::size_t feat_w = 1;
  std::size_t pool_h = 1;  // odd: the window is centred
  std::size_t pool_w = 1;

  friend bool operator==(const LayerSpec&, const LayerSpec&) = default;
};

/// Network structure. `layers[0]` is layer 1, the one closest to the image.
/// With num_classes == 0 there is no class layer and the top sparsification
/// gets an independent Bernoulli(p_S) prior (the single-layer model).
struct Architecture {
  Dims3 image;
  std::vector<LayerSpec> layers;
  std::size_t num_classes = 0;
  std::size_t templates_per_class = 1;

  bool has_class_layer() const { return num_classes > 0; }
  std::size_t num_layers() const { return layers.size(); }
  std::size_t num_templates() const { return num_classes * templates_per_class; }

  /// Throws ShapeError on any inconsistency.
  void validate() const;

  friend bool operator==(const Architecture&, const Architecture&) = default;
};

/// Shapes of layer l: R^l and S^{l-1} share `below`; W^l is
/// below.features x sparse.features x feat_h x feat_w.
struct LayerShape {
  Dims3 below;
  Dims3 sparse;
  std::size_t feat_h = 0;
  std::size_t feat_w = 0;
  std::size_t pool_h = 1;
  std::size_t pool_w = 1;

  std::size_t weight_count() const { return below.features * sparse.features * feat_h * feat_w; }
};

/// Entry 0 is unused so that index l addresses layer l (1..L).
std::vector<LayerShape> layer_shapes(const Architecture& arch);

/// Alternating: Algorithm 1 forward/backward passes. SingleVisit: every
/// per-image factor updated once per epoch, images interleaved at random.
enum class Schedule { Alternating, SingleVisit };

struct Hyperparams {
  double p01 = 0.03;  // P(pixel off | S^0 on)
  double p10 = 0.03;  // P(pixel on | S^0 off)
  double ps = 0.05;
  std::vector<double> pw;  // per layer, index 0 = layer 1
  double alpha = 1.0;      // damping of the POOL -> R messages
  double lambda = 1.0;     // online forgetting
  int epochs = 100;
  std::uint64_t seed = 0;
  bool pool_perturbation = true;
  double perturbation = 1e-3;  // largest pooling log-prior tilt; the centre gets all of it
  double tolerance = 1e-6;
  Schedule schedule = Schedule::Alternating;
  std::size_t minibatch = 5;  // online learning only

  void validate(const Architecture& arch) const;

  friend bool operator==(const Hyperparams&, const Hyperparams&) = default;
};

/// Unary message to S^0 is (k1 - k0) * x + k0.
struct ChannelConstants {
  double k1;
  double k0;

  double evidence(bool pixel) const { return pixel ? k1 : k0; }
};

ChannelConstants channel_constants(double p01, double p10);

double log_odds(double p);

}  // namespace hcn::model
