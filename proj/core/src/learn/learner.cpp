#include "hcn/learn/learner.hpp"

#include <algorithm>
#include <string>

#include "hcn/mp/extended.hpp"
#include "hcn/mp/schedule.hpp"

namespace hcn::learn {

using model::HcnGraph;
using model::ImageNodes;
using model::ShapeError;
using mp::Direction;
using mp::FactorId;
using mp::kInf;
using mp::Role;

namespace {

constexpr std::uint64_t kScheduleStream = 0x9e3779b97f4a7c15ULL;

using RangeList = std::vector<model::FactorRange> ImageNodes::*;

template <class Fn>
void for_range(const model::FactorRange& r, Fn fn) {
  for (FactorId f = r.begin; f < r.end; ++f) fn(f);
}

// Factors of one step touch disjoint outgoing messages, so the sequential
// sweep equals the parallel update of the algorithm.
double update_step(HcnGraph& net, RangeList member, std::size_t layer, Direction dir, double alpha = 1.0) {
  double delta = 0.0;
  for (const auto& img : net.images)
    for_range((img.*member)[layer], [&](FactorId f) { delta = std::max(delta, net.graph.update(f, dir, alpha)); });
  return delta;
}

double update_trees_shuffled(LearnState& st, std::size_t layer, Direction dir) {
  std::vector<FactorId> order;
  for (const auto& img : st.net.images) for_range(img.trees[layer], [&](FactorId f) { order.push_back(f); });
  st.rng.shuffle(std::span<FactorId>(order));
  double delta = 0.0;
  for (FactorId f : order) delta = std::max(delta, st.net.graph.update(f, dir));
  return delta;
}

}  // namespace

Rng schedule_rng(const Hyperparams& hyper) { return Rng(hyper.seed ^ kScheduleStream); }

TrainedModel empty_model(const Architecture& arch, const Hyperparams& hyper) {
  const auto shapes = model::layer_shapes(arch);
  TrainedModel m{arch, hyper, std::vector<BinaryTensor4>(shapes.size())};
  for (std::size_t l = 1; l < shapes.size(); ++l) {
    const auto& s = shapes[l];
    m.weights[l] = BinaryTensor4(s.below.features, s.sparse.features, s.feat_h, s.feat_w);
  }
  return m;
}

std::vector<std::vector<double>> draw_weight_priors(const Architecture& arch, const Hyperparams& hyper, Rng& rng) {
  const auto shapes = model::layer_shapes(arch);
  std::vector<std::vector<double>> priors(shapes.size());
  for (std::size_t l = 1; l < shapes.size(); ++l) {
    const double pw = hyper.pw[l - 1];
    priors[l].resize(shapes[l].weight_count());
    for (double& p : priors[l]) p = model::log_odds(rng.uniform(0.9 * pw, pw));
  }
  return priors;
}

LearnState init_messages(const Architecture& arch, const Hyperparams& hyper, std::span<const BinaryTensor3> images,
                         const Labels& labels, std::span<const BinaryTensor3> masks,
                         const std::vector<std::vector<double>>* weight_priors) {
  if (!masks.empty() && masks.size() != images.size()) throw ShapeError("one mask per image is required");
  LearnState st{model::build_hcn_graph(arch, hyper, images.size(), labels), hyper,
                schedule_rng(hyper), 0, {}};
  HcnGraph& net = st.net;
  mp::FactorGraph& g = net.graph;

  const auto priors = weight_priors ? *weight_priors : draw_weight_priors(arch, hyper, st.rng);
  if (priors.size() != net.w.size()) throw ShapeError("one weight prior vector per layer is required");
  for (std::size_t l = 1; l < net.w.size(); ++l) {
    if (priors[l].size() != net.w[l].size())
      throw ShapeError("weight priors of layer " + std::to_string(l) + " have the wrong size");
    for (std::size_t i = 0; i < net.w[l].size(); ++i) g.set_prior(net.w[l][i], priors[l][i]);
  }

  const auto channel = model::channel_constants(hyper.p01, hyper.p10);
  for (std::size_t n = 0; n < images.size(); ++n)
    model::set_evidence(net, n, images[n], masks.empty() ? nullptr : &masks[n], channel);

  g.fill_messages(Role::Bottom, -kInf);
  if (hyper.schedule == model::Schedule::SingleVisit) {
    // Each factor is seen once, so the sparsifications above the image start
    // from their prior instead of waiting for a backward pass.
    const double ps = model::log_odds(hyper.ps);
    for (auto& img : net.images) {
      for (std::size_t l = 2; l < img.ors.size(); ++l)
        for_range(img.ors[l], [&](FactorId f) { g.fill_messages(f, Role::Bottom, ps); });
      if (img.class_tree) g.fill_messages(*img.class_tree, Role::Bottom, ps);
    }
  }
  g.refresh_beliefs();
  return st;
}

double forward_pass(LearnState& st) {
  HcnGraph& net = st.net;
  double delta = 0.0;
  for (std::size_t l = 1; l <= net.arch.num_layers(); ++l) {
    delta = std::max(delta, update_step(net, &ImageNodes::ors, l, Direction::Up));
    delta = std::max(delta, update_step(net, &ImageNodes::pools, l, Direction::Up, st.hyper.alpha));
    delta = std::max(delta, update_trees_shuffled(st, l, Direction::Up));
  }
  for (const auto& img : net.images)
    if (img.class_tree) delta = std::max(delta, net.graph.update(*img.class_tree, Direction::Both));
  return delta;
}

double backward_pass(LearnState& st, int pool_rounds) {
  HcnGraph& net = st.net;
  double delta = 0.0;
  for (std::size_t l = net.arch.num_layers(); l >= 1; --l) {
    delta = std::max(delta, update_trees_shuffled(st, l, Direction::Down));
    if (pool_rounds <= 0) {
      delta = std::max(delta, update_step(net, &ImageNodes::pools, l, Direction::Down));
    } else {
      for (int k = 0; k < pool_rounds; ++k) {
        delta = std::max(delta, update_step(net, &ImageNodes::pools, l, Direction::Down));
        delta = std::max(delta, update_step(net, &ImageNodes::ors, l, Direction::Up));
      }
    }
    delta = std::max(delta, update_step(net, &ImageNodes::ors, l, Direction::Down));
  }
  return delta;
}

double single_visit_pass(LearnState& st) {
  HcnGraph& net = st.net;
  std::vector<std::vector<mp::Visit>> per_image(net.images.size());
  std::vector<std::uint32_t> tickets;
  std::vector<FactorId> trees;
  for (std::size_t n = 0; n < net.images.size(); ++n) {
    const ImageNodes& img = net.images[n];
    auto& seq = per_image[n];
    for (std::size_t l = 1; l <= net.arch.num_layers(); ++l) {
      for_range(img.ors[l], [&](FactorId f) { seq.push_back({f, Direction::Up, 1.0}); });
      for_range(img.pools[l], [&](FactorId f) { seq.push_back({f, Direction::Up, st.hyper.alpha}); });
      trees.clear();
      for_range(img.trees[l], [&](FactorId f) { trees.push_back(f); });
      st.rng.shuffle(std::span<FactorId>(trees));
      for (FactorId f : trees) seq.push_back({f, Direction::Both, 1.0});
    }
    if (img.class_tree) seq.push_back({*img.class_tree, Direction::Both, 1.0});
    tickets.insert(tickets.end(), seq.size(), static_cast<std::uint32_t>(n));
  }
  st.rng.shuffle(std::span<std::uint32_t>(tickets));

  std::vector<std::size_t> next(net.images.size(), 0);
  double delta = 0.0;
  for (std::uint32_t n : tickets) {
    const mp::Visit& v = per_image[n][next[n]++];
    delta = std::max(delta, net.graph.update(v.factor, v.direction, v.alpha));
  }
  return delta;
}

double run_epoch(LearnState& st) {
  st.net.graph.refresh_beliefs();
  double delta = 0.0;
  if (st.hyper.schedule == model::Schedule::SingleVisit) {
    delta = single_visit_pass(st);
  } else {
    delta = forward_pass(st);
    delta = std::max(delta, backward_pass(st));
  }
  ++st.epoch;
  return delta;
}

TrainedModel binarize_weights(const LearnState& st) {
  TrainedModel m = empty_model(st.net.arch, st.hyper);
  for (std::size_t l = 1; l < st.net.w.size(); ++l) {
    for (std::size_t i = 0; i < st.net.w[l].size(); ++i) m.weights[l].set(i, st.net.graph.belief(st.net.w[l][i]) > 0.0);
  }
  return m;
}

LearnResult learn_batch(std::span<const BinaryTensor3> images, const Labels& labels, const Architecture& arch,
                        const Hyperparams& hyper) {
  if (images.empty()) throw std::invalid_argument("learning needs at least one image");
  LearnState st = init_messages(arch, hyper, images, labels);
  LearnReport report;
  for (int e = 0; e < hyper.epochs; ++e) {
    const double delta = run_epoch(st);
    report.deltas.push_back(delta);
    ++report.epochs_run;
    if (delta < hyper.tolerance) {
      report.converged = true;
      break;
    }
  }
  st.report = report;
  TrainedModel m = binarize_weights(st);
  return {std::move(m), std::move(report), std::move(st)};
}

}  // namespace hcn::learn
