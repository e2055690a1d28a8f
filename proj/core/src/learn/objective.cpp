#include "hcn/learn/objective.hpp"

#include <cmath>
#include <stdexcept>

#include "hcn/model/bconv.hpp"

namespace hcn::learn {

namespace {

double bernoulli_log(std::size_t ones, std::size_t total, double p) {
  return static_cast<double>(ones) * std::log(p) + static_cast<double>(total - ones) * std::log1p(-p);
}

}  // namespace

double joint_log_prob(const model::Architecture& arch, const model::Hyperparams& hyper,
                      const model::BinaryTensor4& weights, std::span<const model::BinaryTensor3> sparsifications,
                      std::span<const model::BinaryTensor3> images) {
  if (arch.num_layers() != 1 || arch.has_class_layer() || arch.layers[0].pool_h != 1 || arch.layers[0].pool_w != 1)
    throw std::invalid_argument("joint_log_prob covers the single-layer model only");
  if (sparsifications.size() != images.size()) throw model::ShapeError("one sparsification per image is required");

  double lp = bernoulli_log(weights.count(), weights.size(), hyper.pw[0]);
  for (std::size_t n = 0; n < images.size(); ++n) {
    const auto& s = sparsifications[n];
    const auto& x = images[n];
    lp += bernoulli_log(s.count(), s.size(), hyper.ps);
    const model::BinaryTensor3 r = model::bconv(s, weights);
    if (!r.same_shape(x)) throw model::ShapeError("reconstruction and image differ in shape");
    for (std::size_t i = 0; i < x.size(); ++i) {
      const bool on = r.at(i), obs = x.at(i);
      const double p_obs_on = on ? 1.0 - hyper.p01 : hyper.p10;
      lp += std::log(obs ? p_obs_on : 1.0 - p_obs_on);
    }
  }
  return lp;
}

}  // namespace hcn::learn
