#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "hcn/model/architecture.hpp"
#include "hcn/model/pooling.hpp"
#include "hcn/model/tensor.hpp"
#include "hcn/mp/factor_graph.hpp"

namespace hcn::model {

struct FactorRange {
  mp::FactorId begin = 0;
  mp::FactorId end = 0;

  std::size_t size() const { return end - begin; }
};

/// Variables and factors owned by one image. Vectors indexed by layer use
/// index l for layer l; s[0] is the bottom sparsification tied to the pixels.
struct ImageNodes {
  std::vector<std::vector<mp::VarId>> s;  // l = 0..L, flat index into shapes[l].sparse (s[0]: image dims)
  std::vector<std::vector<mp::VarId>> r;  // l = 1..L, flat index into shapes[l].below
  std::vector<std::vector<mp::VarId>> u;  // l = 1..L, one per pooling link
  std::vector<mp::VarId> classes;
  std::vector<FactorRange> pools;  // POOL(U | R), one per R element
  std::vector<FactorRange> ors;    // OR(S^{l-1} | U), one per S^{l-1} cell
  std::vector<FactorRange> trees;  // AND-OR tree, one per R element
  std::optional<mp::FactorId> class_tree;
};

/// Factor graph of an HCN over a set of images sharing one copy of the weights.
struct HcnGraph {
  Architecture arch;
  std::vector<LayerShape> shapes;  // index l
  std::vector<PoolMap> pool_maps;  // index l
  mp::FactorGraph graph;
  std::vector<std::vector<mp::VarId>> w;  // l = 1..L, flat BinaryTensor4 index
  std::vector<ImageNodes> images;

  std::size_t num_images() const { return images.size(); }
};

/// Builds the joint graph. `labels` is empty or holds one optional class per
/// image; known labels clamp that image's class variables. With
/// hyper.pool_perturbation the pooling log-probabilities get a small random
/// tilt (at most hyper.perturbation) that keeps the centred shift the most likely one.
HcnGraph build_hcn_graph(const Architecture& arch, const Hyperparams& hyper, std::size_t n_images,
                         std::span<const std::optional<std::size_t>> labels = {});

/// Sets the unary messages of S^0 for one image; pixels with mask == 0 get no evidence.
void set_evidence(HcnGraph& net, std::size_t image, const BinaryTensor3& pixels, const BinaryTensor3* mask,
                  const ChannelConstants& channel);

/// Clamps every weight variable to the given binary weights (index l, entry 0 unused).
void clamp_weights(HcnGraph& net, std::span<const BinaryTensor4> weights);

RealTensor3 sparsification_beliefs(const HcnGraph& net, std::size_t image, std::size_t layer);
RealTensor3 representation_beliefs(const HcnGraph& net, std::size_t image, std::size_t layer);
std::vector<double> weight_beliefs(const HcnGraph& net, std::size_t layer);

}  // namespace hcn::model
