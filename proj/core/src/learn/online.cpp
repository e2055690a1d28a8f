#include "hcn/learn/online.hpp"

#include <algorithm>
#include <stdexcept>

namespace hcn::learn {

OnlineResult learn_online(std::span<const BinaryTensor3> images, const Labels& labels, const Architecture& arch,
                          const Hyperparams& hyper) {
  if (images.empty()) throw std::invalid_argument("online learning needs at least one image");
  if (!labels.empty() && labels.size() != images.size()) throw model::ShapeError("one label slot per image is required");

  Hyperparams mb_hyper = hyper;
  mb_hyper.schedule = model::Schedule::SingleVisit;
  mb_hyper.validate(arch);

  // Same stream as init_messages so that one full-size minibatch reproduces a batch run.
  Rng rng = schedule_rng(mb_hyper);
  const auto prior0 = draw_weight_priors(arch, mb_hyper, rng);
  auto prior = prior0;

  OnlineResult result{empty_model(arch, hyper), {}, {}};
  const std::size_t batch = hyper.minibatch;
  for (int epoch = 0; epoch < hyper.epochs; ++epoch) {
    double epoch_delta = 0.0;
    for (std::size_t start = 0; start < images.size(); start += batch) {
      const std::size_t count = std::min(batch, images.size() - start);
      Labels mb_labels;
      if (!labels.empty()) mb_labels.assign(labels.begin() + start, labels.begin() + start + count);
      LearnState st = init_messages(arch, mb_hyper, images.subspan(start, count), mb_labels, {}, &prior);
      st.rng = rng;
      epoch_delta = std::max(epoch_delta, single_visit_pass(st));
      rng = st.rng;

      result.weight_beliefs.assign(st.net.w.size(), {});
      for (std::size_t l = 1; l < st.net.w.size(); ++l) {
        auto& post = result.weight_beliefs[l];
        post.resize(st.net.w[l].size());
        for (std::size_t i = 0; i < post.size(); ++i) post[i] = st.net.graph.belief(st.net.w[l][i]);
        for (std::size_t i = 0; i < post.size(); ++i)
          prior[l][i] = hyper.lambda == 0.0 ? prior0[l][i]
                                            : hyper.lambda * post[i] + (1.0 - hyper.lambda) * prior0[l][i];
      }
    }
    result.report.deltas.push_back(epoch_delta);
    ++result.report.epochs_run;
  }

  for (std::size_t l = 1; l < result.weight_beliefs.size(); ++l) {
    for (std::size_t i = 0; i < result.weight_beliefs[l].size(); ++i)
      result.model.weights[l].set(i, result.weight_beliefs[l][i] > 0.0);
  }
  return result;
}

}  // namespace hcn::learn
