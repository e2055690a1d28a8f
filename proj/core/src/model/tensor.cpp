#include "hcn/model/tensor.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace hcn::model {

std::size_t BitArray::count() const {
  std::size_t n = 0;
  for (std::uint64_t w : words_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

void BitArray::fill(bool v) {
  std::fill(words_.begin(), words_.end(), v ? ~std::uint64_t{0} : 0);
  if (v && size_ % 64 != 0) words_.back() &= (std::uint64_t{1} << (size_ % 64)) - 1;
}

BinaryTensor3::BinaryTensor3(std::size_t f, std::size_t h, std::size_t w)
    : f_(f), h_(h), w_(w), bits_(f * h * w) {
  if (f == 0 || h == 0 || w == 0) throw std::invalid_argument("tensor dimensions must be positive");
}

BinaryTensor4::BinaryTensor4(std::size_t a, std::size_t f, std::size_t h, std::size_t w)
    : a_(a), f_(f), h_(h), w_(w), bits_(a * f * h * w) {
  if (a == 0 || f == 0 || h == 0 || w == 0) throw std::invalid_argument("tensor dimensions must be positive");
}

std::size_t BinaryTensor4::feature_count(std::size_t f) const {
  std::size_t n = 0;
  for (std::size_t a = 0; a < a_; ++a)
    for (std::size_t r = 0; r < h_; ++r)
      for (std::size_t c = 0; c < w_; ++c) n += (*this)(a, f, r, c) ? 1 : 0;
  return n;
}

BinaryTensor3 threshold(const RealTensor3& beliefs, double t) {
  BinaryTensor3 out(beliefs.f, beliefs.h, beliefs.w);
  for (std::size_t i = 0; i < beliefs.data.size(); ++i) out.set(i, beliefs.data[i] > t);
  return out;
}

std::size_t hamming(const BinaryTensor3& a, const BinaryTensor3& b) {
  if (!a.same_shape(b)) throw std::invalid_argument("hamming: shape mismatch");
  std::size_t d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += a.at(i) != b.at(i) ? 1 : 0;
  return d;
}

}  // namespace hcn::model
