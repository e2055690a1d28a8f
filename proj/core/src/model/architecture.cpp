#include "hcn/model/architecture.hpp"

#include <cmath>
#include <string>

namespace hcn::model {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw ShapeError(what);
}

}  // namespace

void Architecture::validate() const {
  require(image.size() > 0, "image dimensions must be positive");
  require(!layers.empty(), "at least one layer is required");
  Dims3 below = image;
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const LayerSpec& spec = layers[l];
    const std::string tag = "layer " + std::to_string(l + 1) + ": ";
    require(spec.num_features > 0 && spec.feat_h > 0 && spec.feat_w > 0, tag + "sizes must be positive");
    require(spec.pool_h % 2 == 1 && spec.pool_w % 2 == 1, tag + "pool dimensions must be odd");
    require(spec.feat_h <= below.rows && spec.feat_w <= below.cols, tag + "feature larger than the layer below");
    below = {spec.num_features, below.rows - spec.feat_h + 1, below.cols - spec.feat_w + 1};
  }
  if (has_class_layer()) {
    require(templates_per_class > 0, "templates_per_class must be positive");
    require(below.rows == 1 && below.cols == 1,
            "with a class layer the top sparsification must be 1x1 (top features span the whole layer below)");
    require(below.features == num_templates(), "top layer must have num_classes * templates_per_class features");
  }
}

std::vector<LayerShape> layer_shapes(const Architecture& arch) {
  arch.validate();
  std::vector<LayerShape> shapes(arch.layers.size() + 1);
  Dims3 below = arch.image;
  for (std::size_t l = 1; l <= arch.layers.size(); ++l) {
    const LayerSpec& spec = arch.layers[l - 1];
    LayerShape& s = shapes[l];
    s.below = below;
    s.sparse = {spec.num_features, below.rows - spec.feat_h + 1, below.cols - spec.feat_w + 1};
    s.feat_h = spec.feat_h;
    s.feat_w = spec.feat_w;
    s.pool_h = spec.pool_h;
    s.pool_w = spec.pool_w;
    below = s.sparse;
  }
  return shapes;
}

void Hyperparams::validate(const Architecture& arch) const {
  require(p01 > 0.0 && p01 < 0.5, "p01 must lie in (0, 0.5)");
  require(p10 > 0.0 && p10 < 0.5, "p10 must lie in (0, 0.5)");
  require(ps > 0.0 && ps < 1.0, "pS must lie in (0, 1)");
  require(pw.size() == arch.num_layers(), "one pW per layer is required");
  for (double p : pw) require(p > 0.0 && p < 1.0, "pW must lie in (0, 1)");
  require(alpha > 0.0 && alpha <= 1.0, "damping must lie in (0, 1]");
  require(lambda >= 0.0 && lambda <= 1.0, "lambda must lie in [0, 1]");
  require(epochs >= 0, "epochs must be non-negative");
  require(tolerance >= 0.0, "tolerance must be non-negative");
  require(minibatch > 0, "minibatch size must be positive");
  require(perturbation >= 0.0, "pool perturbation must be non-negative");
}

ChannelConstants channel_constants(double p01, double p10) {
  return {std::log((1.0 - p01) / p10), std::log(p01 / (1.0 - p10))};
}

double log_odds(double p) { return std::log(p / (1.0 - p)); }

}  // namespace hcn::model
