#include "hcn/model/hcn_graph.hpp"

#include <cmath>
#include <string>

namespace hcn::model {

namespace {

std::vector<mp::VarId> add_variables(mp::FactorGraph& g, std::size_t n, double prior = 0.0) {
  std::vector<mp::VarId> ids(n);
  for (auto& id : ids) id = g.add_variable(prior);
  return ids;
}

std::vector<double> pool_log_priors(const PoolMap& map, std::size_t element, double tilt, Rng& rng) {
  const std::size_t m = map.pool_size(element);
  std::vector<double> lp(m, -std::log(static_cast<double>(m)));
  if (tilt <= 0.0) return {};
  const std::uint32_t first = map.source_begin[element];
  for (std::size_t k = 0; k < m; ++k) {
    const bool centre = map.link_shift[first + k] == map.center_shift();
    lp[k] += centre ? tilt : tilt * rng.uniform();
  }
  return lp;
}

void build_layer(HcnGraph& net, ImageNodes& img, std::size_t l, double tilt) {
  mp::FactorGraph& g = net.graph;
  const LayerShape& shape = net.shapes[l];
  const PoolMap& map = net.pool_maps[l];

  img.r[l] = add_variables(g, shape.below.size());
  img.u[l] = add_variables(g, map.num_links());

  img.pools[l].begin = static_cast<mp::FactorId>(g.num_factors());
  std::vector<mp::VarId> members;
  for (std::size_t i = 0; i < shape.below.size(); ++i) {
    members.assign(img.u[l].begin() + map.source_begin[i], img.u[l].begin() + map.source_begin[i + 1]);
    const auto lp = pool_log_priors(map, i, tilt, g.rng());
    g.add_pool(img.r[l][i], members, lp);
  }
  img.pools[l].end = static_cast<mp::FactorId>(g.num_factors());

  img.ors[l].begin = img.pools[l].end;
  for (std::size_t j = 0; j < shape.below.size(); ++j) {
    members.clear();
    for (std::uint32_t k = map.target_begin[j]; k < map.target_begin[j + 1]; ++k)
      members.push_back(img.u[l][map.target_link[k]]);
    g.add_or(members, img.s[l - 1][j]);
  }
  img.ors[l].end = static_cast<mp::FactorId>(g.num_factors());

  // R(a, r, c) = OR over (f, dr, dc) of S(f, r-dr, c-dc) AND W(a, f, dr, dc).
  img.trees[l].begin = img.ors[l].end;
  const Dims3& sp = shape.sparse;
  std::vector<mp::VarId> s_leaves, w_leaves;
  for (std::size_t a = 0; a < shape.below.features; ++a) {
    for (std::size_t r = 0; r < shape.below.rows; ++r) {
      for (std::size_t c = 0; c < shape.below.cols; ++c) {
        s_leaves.clear();
        w_leaves.clear();
        for (std::size_t f = 0; f < sp.features; ++f) {
          for (std::size_t dr = 0; dr < shape.feat_h; ++dr) {
            if (dr > r || r - dr >= sp.rows) continue;
            for (std::size_t dc = 0; dc < shape.feat_w; ++dc) {
              if (dc > c || c - dc >= sp.cols) continue;
              s_leaves.push_back(img.s[l][(f * sp.rows + (r - dr)) * sp.cols + (c - dc)]);
              w_leaves.push_back(net.w[l][((a * sp.features + f) * shape.feat_h + dr) * shape.feat_w + dc]);
            }
          }
        }
        const std::size_t i = (a * shape.below.rows + r) * shape.below.cols + c;
        g.add_andor_tree(img.r[l][i], s_leaves, w_leaves);
      }
    }
  }
  img.trees[l].end = static_cast<mp::FactorId>(g.num_factors());
}

}  // namespace

HcnGraph build_hcn_graph(const Architecture& arch, const Hyperparams& hyper, std::size_t n_images,
                         std::span<const std::optional<std::size_t>> labels) {
  hyper.validate(arch);
  if (!labels.empty() && labels.size() != n_images) throw ShapeError("one label slot per image is required");

  HcnGraph net{arch, layer_shapes(arch), {}, mp::FactorGraph(hyper.seed), {}, {}};
  const std::size_t depth = arch.num_layers();
  net.pool_maps.resize(depth + 1);
  net.w.resize(depth + 1);
  for (std::size_t l = 1; l <= depth; ++l) {
    const LayerShape& s = net.shapes[l];
    net.pool_maps[l] = pooling_connectivity(s.below, s.pool_h, s.pool_w);
    net.w[l] = add_variables(net.graph, s.weight_count(), log_odds(hyper.pw[l - 1]));
  }

  net.images.resize(n_images);
  for (std::size_t n = 0; n < n_images; ++n) {
    ImageNodes& img = net.images[n];
    img.s.resize(depth + 1);
    img.r.resize(depth + 1);
    img.u.resize(depth + 1);
    img.pools.resize(depth + 1);
    img.ors.resize(depth + 1);
    img.trees.resize(depth + 1);

    img.s[0] = add_variables(net.graph, arch.image.size());
    for (std::size_t l = 1; l <= depth; ++l) {
      const bool top_prior = l == depth && !arch.has_class_layer();
      img.s[l] = add_variables(net.graph, net.shapes[l].sparse.size(), top_prior ? log_odds(hyper.ps) : 0.0);
    }
    for (std::size_t l = 1; l <= depth; ++l) build_layer(net, img, l, hyper.pool_perturbation ? hyper.perturbation : 0.0);

    if (arch.has_class_layer()) {
      img.classes = add_variables(net.graph, arch.num_classes);
      img.class_tree = net.graph.add_class_tree(img.classes, img.s[depth]);
      if (!labels.empty() && labels[n]) {
        const std::size_t label = *labels[n];
        if (label >= arch.num_classes) throw ShapeError("label " + std::to_string(label) + " out of range");
        for (std::size_t k = 0; k < arch.num_classes; ++k)
          net.graph.clamp(img.classes[k], k == label ? mp::Clamp::One : mp::Clamp::Zero);
      }
    }
  }
  return net;
}

void set_evidence(HcnGraph& net, std::size_t image, const BinaryTensor3& pixels, const BinaryTensor3* mask,
                  const ChannelConstants& channel) {
  const Dims3& d = net.arch.image;
  if (pixels.features() != d.features || pixels.rows() != d.rows || pixels.cols() != d.cols)
    throw ShapeError("image does not match the architecture's input dimensions");
  if (mask && !mask->same_shape(pixels)) throw ShapeError("mask shape differs from image shape");
  const auto& s0 = net.images.at(image).s[0];
  for (std::size_t i = 0; i < s0.size(); ++i) {
    const bool observed = mask == nullptr || mask->at(i);
    net.graph.set_prior(s0[i], observed ? channel.evidence(pixels.at(i)) : 0.0);
  }
}

void clamp_weights(HcnGraph& net, std::span<const BinaryTensor4> weights) {
  if (weights.size() != net.w.size()) throw ShapeError("one weight tensor per layer is required");
  for (std::size_t l = 1; l < net.w.size(); ++l) {
    const BinaryTensor4& wl = weights[l];
    const LayerShape& s = net.shapes[l];
    if (wl.channels() != s.below.features || wl.features() != s.sparse.features || wl.rows() != s.feat_h ||
        wl.cols() != s.feat_w)
      throw ShapeError("weights of layer " + std::to_string(l) + " do not match the architecture");
    for (std::size_t i = 0; i < net.w[l].size(); ++i)
      net.graph.clamp(net.w[l][i], wl.at(i) ? mp::Clamp::One : mp::Clamp::Zero);
  }
}

namespace {

RealTensor3 gather(const mp::FactorGraph& g, const std::vector<mp::VarId>& ids, const Dims3& d) {
  RealTensor3 t(d.features, d.rows, d.cols);
  for (std::size_t i = 0; i < ids.size(); ++i) t.data[i] = g.belief(ids[i]);
  return t;
}

}  // namespace

RealTensor3 sparsification_beliefs(const HcnGraph& net, std::size_t image, std::size_t layer) {
  const Dims3& d = layer == 0 ? net.arch.image : net.shapes.at(layer).sparse;
  return gather(net.graph, net.images.at(image).s.at(layer), d);
}

RealTensor3 representation_beliefs(const HcnGraph& net, std::size_t image, std::size_t layer) {
  return gather(net.graph, net.images.at(image).r.at(layer), net.shapes.at(layer).below);
}

std::vector<double> weight_beliefs(const HcnGraph& net, std::size_t layer) {
  std::vector<double> b(net.w.at(layer).size());
  for (std::size_t i = 0; i < b.size(); ++i) b[i] = net.graph.belief(net.w[layer][i]);
  return b;
}

}  // namespace hcn::model
