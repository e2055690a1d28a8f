#include "hcn/infer/infer.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

#include "hcn/model/bconv.hpp"
#include "hcn/mp/extended.hpp"

namespace hcn::infer {

using model::ShapeError;

namespace {

model::Hyperparams inference_hyper(const TrainedModel& m, bool perturb) {
  model::Hyperparams h = m.hyper;
  h.alpha = 1.0;
  h.pool_perturbation = perturb;
  h.schedule = model::Schedule::Alternating;
  return h;
}

void require_class_layer(const TrainedModel& m) {
  if (!m.arch.has_class_layer()) throw ShapeError("classification needs a model with a class layer");
  if (m.weights.size() != m.arch.num_layers() + 1) throw ShapeError("model has the wrong number of weight layers");
}

ClassScores finish(std::vector<double> templates, std::size_t per_class) {
  ClassScores out;
  out.templates = std::move(templates);
  out.classes.assign(out.templates.size() / per_class, -mp::kInf);
  for (std::size_t t = 0; t < out.templates.size(); ++t)
    out.classes[t / per_class] = std::max(out.classes[t / per_class], out.templates[t]);
  out.template_id = tolerant_argmax(out.templates);
  out.label = out.template_id / per_class;
  return out;
}

}  // namespace

std::size_t tolerant_argmax(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("argmax of an empty set");
  const double best = *std::max_element(values.begin(), values.end());
  const double slack = std::isfinite(best) ? 1e-9 * std::max(1.0, std::abs(best)) : 0.0;
  for (std::size_t i = 0; i < values.size(); ++i)
    if (values[i] >= best - slack) return i;
  return 0;
}

ForwardClassifier::ForwardClassifier(const TrainedModel& model)
    : channel_(model::channel_constants(model.hyper.p01, model.hyper.p10)) {
  require_class_layer(model);
  const BinaryTensor3 blank(model.arch.image.features, model.arch.image.rows, model.arch.image.cols);
  const std::vector<BinaryTensor3> one{blank};
  state_ = learn::init_messages(model.arch, inference_hyper(model, false), one);
  model::clamp_weights(state_.net, model.weights);
}

ClassScores ForwardClassifier::operator()(const BinaryTensor3& image) {
  auto& g = state_.net.graph;
  model::set_evidence(state_.net, 0, image, nullptr, channel_);
  g.fill_messages(mp::Role::Top, 0.0);
  g.fill_messages(mp::Role::Bottom, -mp::kInf);
  g.refresh_beliefs();
  learn::forward_pass(state_);

  const auto& img = state_.net.images[0];
  const mp::FactorId tree = *img.class_tree;
  const std::size_t k = state_.net.arch.num_classes;
  std::vector<double> templates(state_.net.arch.num_templates());
  for (std::size_t t = 0; t < templates.size(); ++t) templates[t] = g.cavity(tree, k + t);
  return finish(std::move(templates), state_.net.arch.templates_per_class);
}

ClassScores classify_forward(const BinaryTensor3& image, const TrainedModel& model) {
  ForwardClassifier c(model);
  return c(image);
}

ClassScores classify_direct(const BinaryTensor3& image, const TrainedModel& model) {
  require_class_layer(model);
  const auto& arch = model.arch;
  if (image.features() != arch.image.features || image.rows() != arch.image.rows || image.cols() != arch.image.cols)
    throw ShapeError("image does not match the architecture's input dimensions");
  const auto shapes = model::layer_shapes(arch);
  const auto channel = model::channel_constants(model.hyper.p01, model.hyper.p10);

  RealTensor3 below(arch.image.features, arch.image.rows, arch.image.cols);
  for (std::size_t i = 0; i < below.data.size(); ++i) below.data[i] = channel.evidence(image.at(i));

  for (std::size_t l = 1; l <= arch.num_layers(); ++l) {
    const auto& s = shapes[l];
    const auto ph = static_cast<long>(s.pool_h / 2), pw = static_cast<long>(s.pool_w / 2);
    const auto rows = static_cast<long>(s.below.rows), cols = static_cast<long>(s.below.cols);
    RealTensor3 pooled(s.below.features, s.below.rows, s.below.cols);
    for (std::size_t a = 0; a < s.below.features; ++a)
      for (long r = 0; r < rows; ++r)
        for (long c = 0; c < cols; ++c) {
          double best = -mp::kInf;
          std::size_t m = 0;
          for (long dr = -ph; dr <= ph; ++dr)
            for (long dc = -pw; dc <= pw; ++dc) {
              const long rr = r + dr, cc = c + dc;
              if (rr < 0 || rr >= rows || cc < 0 || cc >= cols) continue;
              best = std::max(best, below(a, rr, cc));
              ++m;
            }
          pooled(a, r, c) = best - std::log(static_cast<double>(m));
        }

    const auto& w = model.weights[l];
    RealTensor3 above(s.sparse.features, s.sparse.rows, s.sparse.cols);
    for (std::size_t f = 0; f < s.sparse.features; ++f)
      for (std::size_t r = 0; r < s.sparse.rows; ++r)
        for (std::size_t c = 0; c < s.sparse.cols; ++c) {
          double sum = 0.0;
          for (std::size_t a = 0; a < s.below.features; ++a)
            for (std::size_t dr = 0; dr < s.feat_h; ++dr)
              for (std::size_t dc = 0; dc < s.feat_w; ++dc)
                if (w(a, f, dr, dc)) sum += pooled(a, r + dr, c + dc);
          above(f, r, c) = sum;
        }
    below = std::move(above);
  }
  return finish(std::move(below.data), arch.templates_per_class);
}

std::size_t inference_threads() {
  if (const char* env = std::getenv("HCN_THREADS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && n > 0) return static_cast<std::size_t>(n);
  }
  return std::max(1U, std::thread::hardware_concurrency());
}

std::vector<ClassScores> classify_batch(std::span<const BinaryTensor3> images, const TrainedModel& model,
                                        std::size_t threads) {
  std::vector<ClassScores> out(images.size());
  if (images.empty()) return out;
  if (threads == 0) threads = inference_threads();
  threads = std::min(threads, images.size());

  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    try {
      ForwardClassifier classify(model);
      for (std::size_t i = next++; i < images.size(); i = next++) out[i] = classify(images[i]);
    } catch (...) {
      std::lock_guard lock(error_mutex);
      if (!error) error = std::current_exception();
      next = images.size();
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
  return out;
}

BinaryTensor3 inpaint(const BinaryTensor3& image, const BinaryTensor3& mask, const TrainedModel& model,
                      std::optional<std::size_t> label, int rounds) {
  if (!mask.same_shape(image)) throw ShapeError("mask shape differs from image shape");
  const std::vector<BinaryTensor3> images{image}, masks{mask};
  learn::Labels labels;
  if (label) labels.push_back(label);
  auto st = learn::init_messages(model.arch, inference_hyper(model, true), images, labels, masks);
  model::clamp_weights(st.net, model.weights);
  st.net.graph.refresh_beliefs();
  learn::forward_pass(st);
  learn::backward_pass(st, rounds);

  const RealTensor3 s0 = model::sparsification_beliefs(st.net, 0, 0);
  BinaryTensor3 out = image;
  for (std::size_t i = 0; i < out.size(); ++i)
    if (!mask.at(i)) out.set(i, s0.data[i] > 0.0);
  return out;
}

BinaryTensor3 reconstruct(const RealTensor3& s_beliefs, const BinaryTensor4& weights) {
  if (s_beliefs.f != weights.features()) throw ShapeError("sparsification and weights disagree on features");
  return model::bconv(model::threshold(s_beliefs), weights);
}

BinaryTensor3 reconstruct(const RealTensor3& s_beliefs, std::span<const double> w_beliefs, std::size_t a,
                          std::size_t f, std::size_t h, std::size_t w) {
  BinaryTensor4 wt(a, f, h, w);
  if (w_beliefs.size() != wt.size()) throw ShapeError("weight beliefs have the wrong size");
  for (std::size_t i = 0; i < wt.size(); ++i) wt.set(i, w_beliefs[i] > 0.0);
  return reconstruct(s_beliefs, wt);
}

BinaryTensor3 render_top_down(const BinaryTensor3& s, std::span<const BinaryTensor4> weights, std::size_t layer) {
  if (layer == 0 || layer >= weights.size()) throw ShapeError("no such layer");
  BinaryTensor3 cur = s;
  for (std::size_t l = layer; l >= 1; --l) cur = model::bconv(cur, weights[l]);
  return cur;
}

std::vector<BinaryTensor3> feature_renderings(std::span<const BinaryTensor4> weights, std::size_t layer) {
  if (layer == 0 || layer >= weights.size()) throw ShapeError("no such layer");
  const std::size_t features = weights[layer].features();
  std::vector<BinaryTensor3> out;
  for (std::size_t f = 0; f < features; ++f) {
    BinaryTensor3 s(features, 1, 1);
    s.set(f, 0, 0, true);
    BinaryTensor3 pixels = render_top_down(s, weights, layer);
    // Multi-channel inputs are shown as the OR of their channels.
    BinaryTensor3 flat(1, pixels.rows(), pixels.cols());
    for (std::size_t c = 0; c < pixels.features(); ++c)
      for (std::size_t r = 0; r < pixels.rows(); ++r)
        for (std::size_t k = 0; k < pixels.cols(); ++k)
          if (pixels(c, r, k)) flat.set(0, r, k, true);
    out.push_back(std::move(flat));
  }
  return out;
}

std::vector<std::size_t> feature_usage(std::span<const BinaryTensor3> s) {
  if (s.empty()) return {};
  std::vector<std::size_t> usage(s.front().features(), 0);
  for (const auto& t : s) {
    if (t.features() != usage.size()) throw ShapeError("sparsifications differ in features");
    for (std::size_t f = 0; f < t.features(); ++f)
      for (std::size_t r = 0; r < t.rows(); ++r)
        for (std::size_t c = 0; c < t.cols(); ++c) usage[f] += t(f, r, c);
  }
  return usage;
}

Sparsification extract_sparsification(const learn::LearnState& state, std::size_t image, std::size_t layer) {
  Sparsification out;
  out.s = model::threshold(model::sparsification_beliefs(state.net, image, layer));
  out.usage = feature_usage(std::span<const BinaryTensor3>(&out.s, 1));
  return out;
}

data::Compression model_compression(std::span<const BinaryTensor3> images, const learn::LearnState& state,
                                    const BinaryTensor4& weights) {
  if (state.net.arch.num_layers() != 1) throw ShapeError("compression is defined for single-layer models");
  if (state.net.num_images() != images.size()) throw ShapeError("state and images disagree in count");
  std::vector<BinaryTensor3> s, r;
  for (std::size_t n = 0; n < images.size(); ++n) {
    s.push_back(model::threshold(model::sparsification_beliefs(state.net, n, 1)));
    r.push_back(model::bconv(s.back(), weights));
  }
  return data::compression(images, s, weights, r);
}

learn::LearnState fit_sparsification(std::span<const BinaryTensor3> images, const TrainedModel& model, int epochs) {
  model::Hyperparams h = model.hyper;
  h.schedule = model::Schedule::Alternating;
  auto st = learn::init_messages(model.arch, h, images);
  model::clamp_weights(st.net, model.weights);
  st.net.graph.refresh_beliefs();
  for (int e = 0; e < epochs; ++e) {
    const double delta = learn::run_epoch(st);
    st.report.deltas.push_back(delta);
    ++st.report.epochs_run;
    if (delta < h.tolerance) {
      st.report.converged = true;
      break;
    }
  }
  return st;
}

}  // namespace hcn::infer
