#include <gtest/gtest.h>

#include <cmath>
#include <optional>
#include <vector>

#include "hcn/model/architecture.hpp"
#include "hcn/model/hcn_graph.hpp"

using namespace hcn::model;
using hcn::mp::Clamp;
using hcn::mp::FactorKind;

namespace {

Architecture tiny_arch() {
  Architecture a;
  a.image = {1, 3, 3};
  a.layers = {{2, 2, 2, 3, 3}};
  return a;
}

Hyperparams tiny_hyper() {
  Hyperparams h;
  h.pw = {0.2};
  h.ps = 0.1;
  h.pool_perturbation = false;
  return h;
}

}  // namespace

TEST(Architecture, ShapeAlgebra) {
  Architecture a;
  a.image = {1, 17, 17};
  a.layers = {{4, 13, 13, 3, 3}, {4, 5, 5, 3, 3}};
  a.num_classes = 2;
  a.templates_per_class = 2;
  const auto s = layer_shapes(a);
  ASSERT_EQ(s.size(), 3u);
  EXPECT_EQ(s[1].sparse, (Dims3{4, 5, 5}));
  EXPECT_EQ(s[2].below, (Dims3{4, 5, 5}));
  EXPECT_EQ(s[2].sparse, (Dims3{4, 1, 1}));
  EXPECT_EQ(s[1].weight_count(), 4u * 13 * 13);
}

TEST(Architecture, RejectsBadShapes) {
  Architecture a = tiny_arch();
  a.layers[0].pool_h = 2;
  EXPECT_THROW(a.validate(), ShapeError);
  a = tiny_arch();
  a.layers[0].feat_h = 4;
  EXPECT_THROW(a.validate(), ShapeError);
  a = tiny_arch();
  a.num_classes = 1;
  EXPECT_THROW(a.validate(), ShapeError);  // top is 2x2, not 1x1
}

TEST(Hyperparams, Ranges) {
  Hyperparams h = tiny_hyper();
  EXPECT_NO_THROW(h.validate(tiny_arch()));
  h.p10 = 0.5;
  EXPECT_THROW(h.validate(tiny_arch()), ShapeError);
  h = tiny_hyper();
  h.pw = {0.2, 0.2};
  EXPECT_THROW(h.validate(tiny_arch()), ShapeError);
  h = tiny_hyper();
  h.alpha = 0.0;
  EXPECT_THROW(h.validate(tiny_arch()), ShapeError);
}

TEST(Channel, Constants) {
  const auto k = channel_constants(0.03, 0.03);
  EXPECT_NEAR(k.k1, 3.4761, 1e-4);
  EXPECT_NEAR(k.k0, -3.4761, 1e-4);
  const auto a = channel_constants(0.1, 0.2);
  EXPECT_NEAR(a.k1, std::log(0.9 / 0.2), 1e-12);
  EXPECT_NEAR(a.k0, std::log(0.1 / 0.8), 1e-12);
}

TEST(HcnGraph, NoImagesHasOnlyWeights) {
  const auto net = build_hcn_graph(tiny_arch(), tiny_hyper(), 0);
  EXPECT_EQ(net.graph.num_variables(), 8u);
  EXPECT_EQ(net.graph.num_factors(), 0u);
  for (auto v : net.w[1]) EXPECT_DOUBLE_EQ(net.graph.prior(v), log_odds(0.2));
}

TEST(HcnGraph, Census) {
  // per image: S0 9, S1 2x2x2 = 8, R 9, U = 4*4 + 4*6 + 9 = 49; W 1x2x2x2 = 8
  const auto net = build_hcn_graph(tiny_arch(), tiny_hyper(), 2);
  EXPECT_EQ(net.graph.num_variables(), 8u + 2 * (9 + 8 + 9 + 49));
  EXPECT_EQ(net.graph.num_factors(), 2u * (9 + 9 + 9));
  // tree leaves: 2 features x (1+2+1)^2 (S, W) pairs, plus the root, per image
  std::size_t tree_edges = 0;
  for (auto f = net.images[0].trees[1].begin; f < net.images[0].trees[1].end; ++f) tree_edges += net.graph.arity(f);
  EXPECT_EQ(tree_edges, 9u + 2 * 2 * 16);
  for (auto v : net.images[1].s[1]) EXPECT_DOUBLE_EQ(net.graph.prior(v), log_odds(0.1));
}

TEST(HcnGraph, BmfCaseIsOneToOne) {
  Architecture a;
  a.image = {1, 4, 5};
  a.layers = {{2, 1, 1, 1, 1}};
  const auto net = build_hcn_graph(a, tiny_hyper(), 1);
  const auto& img = net.images[0];
  EXPECT_EQ(img.u[1].size(), 20u);
  for (auto f = img.pools[1].begin; f < img.ors[1].end; ++f) EXPECT_EQ(net.graph.arity(f), 2u);
  for (auto f = img.trees[1].begin; f < img.trees[1].end; ++f) EXPECT_EQ(net.graph.arity(f), 1u + 2 * 2);
}

TEST(HcnGraph, LabelsClampClasses) {
  Architecture a;
  a.image = {1, 3, 3};
  a.layers = {{4, 3, 3, 1, 1}};
  a.num_classes = 2;
  a.templates_per_class = 2;
  std::vector<std::optional<std::size_t>> labels{1, std::nullopt};
  const auto net = build_hcn_graph(a, tiny_hyper(), 2, labels);
  EXPECT_EQ(net.graph.clamp_state(net.images[0].classes[0]), Clamp::Zero);
  EXPECT_EQ(net.graph.clamp_state(net.images[0].classes[1]), Clamp::One);
  EXPECT_EQ(net.graph.clamp_state(net.images[1].classes[0]), Clamp::Free);
  ASSERT_TRUE(net.images[0].class_tree);
  EXPECT_EQ(net.graph.kind(*net.images[0].class_tree), FactorKind::ClassTree);
  // top S of a class model gets no prior of its own
  for (auto v : net.images[0].s[1]) EXPECT_EQ(net.graph.prior(v), 0.0);

  labels[1] = 2;
  EXPECT_THROW(build_hcn_graph(a, tiny_hyper(), 2, labels), ShapeError);
}

TEST(HcnGraph, PoolPerturbationFavoursCentre) {
  Hyperparams h = tiny_hyper();
  h.pool_perturbation = true;
  h.perturbation = 1e-3;
  const auto net = build_hcn_graph(tiny_arch(), h, 1);
  const auto& map = net.pool_maps[1];
  const auto f = net.images[0].pools[1].begin + 4;  // interior element
  const auto lp = net.graph.pool_log_priors(f);
  ASSERT_EQ(lp.size(), 9u);
  const double base = -std::log(9.0);
  for (std::size_t k = 0; k < 9; ++k) {
    const bool centre = map.link_shift[map.source_begin[4] + k] == map.center_shift();
    if (centre)
      EXPECT_NEAR(lp[k], base + 1e-3, 1e-15);
    else {
      EXPECT_GE(lp[k], base);
      EXPECT_LT(lp[k], base + 1e-3);
    }
  }
  EXPECT_TRUE(build_hcn_graph(tiny_arch(), tiny_hyper(), 1).graph.pool_log_priors(f).empty());
}

TEST(HcnGraph, EvidenceAndMask) {
  auto net = build_hcn_graph(tiny_arch(), tiny_hyper(), 1);
  BinaryTensor3 x(1, 3, 3), mask(1, 3, 3);
  x.set(0, 1, 1, true);
  for (std::size_t i = 0; i < mask.size(); ++i) mask.set(i, i != 0);
  const auto k = channel_constants(0.03, 0.03);
  set_evidence(net, 0, x, &mask, k);
  const auto& s0 = net.images[0].s[0];
  EXPECT_EQ(net.graph.prior(s0[0]), 0.0);
  EXPECT_DOUBLE_EQ(net.graph.prior(s0[4]), k.k1);
  EXPECT_DOUBLE_EQ(net.graph.prior(s0[1]), k.k0);
  EXPECT_THROW(set_evidence(net, 0, BinaryTensor3(1, 3, 4), nullptr, k), ShapeError);
}

TEST(HcnGraph, ClampWeights) {
  auto net = build_hcn_graph(tiny_arch(), tiny_hyper(), 1);
  std::vector<BinaryTensor4> w(2);
  w[1] = BinaryTensor4(1, 2, 2, 2);
  w[1].set(0, 1, 0, 1, true);
  clamp_weights(net, w);
  const auto b = weight_beliefs(net, 1);
  for (std::size_t i = 0; i < b.size(); ++i) EXPECT_EQ(b[i] > 0, w[1].at(i));
  w[1] = BinaryTensor4(1, 2, 3, 2);
  EXPECT_THROW(clamp_weights(net, w), ShapeError);
}
