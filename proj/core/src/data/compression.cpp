#include "hcn/data/compression.hpp"

#include <cmath>
#include <limits>

#include "hcn/model/bconv.hpp"

namespace hcn::data {

double binary_entropy(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

double encoding_cost(std::size_t ones, std::size_t total) {
  if (total == 0) return 0.0;
  return static_cast<double>(total) * binary_entropy(static_cast<double>(ones) / static_cast<double>(total));
}

double encoding_cost(std::span<const std::uint8_t> bits) {
  std::size_t ones = 0;
  for (auto b : bits) ones += b != 0;
  return encoding_cost(ones, bits.size());
}

Compression compression(std::span<const model::BinaryTensor3> images,
                        std::span<const model::BinaryTensor3> sparsifications, const model::BinaryTensor4& weights,
                        std::span<const model::BinaryTensor3> reconstructions) {
  if (images.size() != sparsifications.size() || images.size() != reconstructions.size())
    throw model::ShapeError("compression needs one sparsification and reconstruction per image");

  const std::size_t features = weights.features();
  std::vector<bool> used(features, false);
  for (const auto& s : sparsifications) {
    if (s.features() != features) throw model::ShapeError("sparsification and weights disagree on features");
    for (std::size_t f = 0; f < features; ++f)
      for (std::size_t i = 0; i < s.rows() * s.cols() && !used[f]; ++i) used[f] = s.at(f * s.rows() * s.cols() + i);
  }

  Compression c;
  std::size_t x_ones = 0, x_total = 0, err_ones = 0, s_ones = 0, s_total = 0, w_ones = 0, w_total = 0;
  for (std::size_t n = 0; n < images.size(); ++n) {
    if (!images[n].same_shape(reconstructions[n])) throw model::ShapeError("reconstruction shape differs from image");
    x_ones += images[n].count();
    x_total += images[n].size();
    err_ones += model::hamming(images[n], reconstructions[n]);
    const auto& s = sparsifications[n];
    const std::size_t plane = s.rows() * s.cols();
    for (std::size_t f = 0; f < features; ++f) {
      if (!used[f]) continue;
      for (std::size_t i = 0; i < plane; ++i) s_ones += s.at(f * plane + i);
      s_total += plane;
    }
  }
  for (std::size_t f = 0; f < features; ++f) {
    if (!used[f]) continue;
    ++c.used_features;
    for (std::size_t a = 0; a < weights.channels(); ++a)
      for (std::size_t r = 0; r < weights.rows(); ++r)
        for (std::size_t col = 0; col < weights.cols(); ++col) {
          w_ones += weights(a, f, r, col);
          ++w_total;
        }
  }

  c.image_bits = encoding_cost(x_ones, x_total);
  c.sparsification_bits = encoding_cost(s_ones, s_total);
  c.weight_bits = encoding_cost(w_ones, w_total);
  c.error_bits = encoding_cost(err_ones, x_total);
  const double parts = c.sparsification_bits + c.weight_bits + c.error_bits;
  c.percent = c.image_bits > 0.0 ? 100.0 * parts / c.image_bits : std::numeric_limits<double>::infinity();
  return c;
}

double compression_ratio(std::span<const model::BinaryTensor3> images,
                         std::span<const model::BinaryTensor3> sparsifications, const model::BinaryTensor4& weights,
                         std::span<const model::BinaryTensor3> reconstructions) {
  return compression(images, sparsifications, weights, reconstructions).percent;
}

}  // namespace hcn::data
