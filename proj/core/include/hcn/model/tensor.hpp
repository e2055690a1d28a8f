#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace hcn::model {

/// Packed bit storage shared by the binary tensors (64 entries per word).
class BitArray {
 public:
  BitArray() = default;
  explicit BitArray(std::size_t n) : size_(n), words_((n + 63) / 64, 0) {}

  std::size_t size() const { return size_; }
  bool get(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1U; }
  void set(std::size_t i, bool v) {
    const std::uint64_t mask = std::uint64_t{1} << (i & 63);
    if (v) {
      words_[i >> 6] |= mask;
    } else {
      words_[i >> 6] &= ~mask;
    }
  }
  std::size_t count() const;
  void fill(bool v);

  friend bool operator==(const BitArray&, const BitArray&) = default;

 private:
  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

/// Features-or-channels x rows x cols array of bits (X, S, R, and U with its
/// shift dimensions folded into F).
class BinaryTensor3 {
 public:
  BinaryTensor3() = default;
  BinaryTensor3(std::size_t f, std::size_t h, std::size_t w);

  std::size_t features() const { return f_; }
  std::size_t rows() const { return h_; }
  std::size_t cols() const { return w_; }
  std::size_t size() const { return bits_.size(); }

  std::size_t index(std::size_t f, std::size_t r, std::size_t c) const { return (f * h_ + r) * w_ + c; }
  bool operator()(std::size_t f, std::size_t r, std::size_t c) const { return bits_.get(index(f, r, c)); }
  void set(std::size_t f, std::size_t r, std::size_t c, bool v) { bits_.set(index(f, r, c), v); }
  bool at(std::size_t i) const { return bits_.get(i); }
  void set(std::size_t i, bool v) { bits_.set(i, v); }

  std::size_t count() const { return bits_.count(); }
  bool same_shape(const BinaryTensor3& o) const { return f_ == o.f_ && h_ == o.h_ && w_ == o.w_; }

  friend bool operator==(const BinaryTensor3&, const BinaryTensor3&) = default;

 private:
  std::size_t f_ = 0, h_ = 0, w_ = 0;
  BitArray bits_;
};

/// Channels-below x features x rows x cols weights of one layer.
class BinaryTensor4 {
 public:
  BinaryTensor4() = default;
  BinaryTensor4(std::size_t a, std::size_t f, std::size_t h, std::size_t w);

  std::size_t channels() const { return a_; }
  std::size_t features() const { return f_; }
  std::size_t rows() const { return h_; }
  std::size_t cols() const { return w_; }
  std::size_t size() const { return bits_.size(); }

  std::size_t index(std::size_t a, std::size_t f, std::size_t r, std::size_t c) const {
    return ((a * f_ + f) * h_ + r) * w_ + c;
  }
  bool operator()(std::size_t a, std::size_t f, std::size_t r, std::size_t c) const {
    return bits_.get(index(a, f, r, c));
  }
  void set(std::size_t a, std::size_t f, std::size_t r, std::size_t c, bool v) { bits_.set(index(a, f, r, c), v); }
  bool at(std::size_t i) const { return bits_.get(i); }
  void set(std::size_t i, bool v) { bits_.set(i, v); }

  std::size_t count() const { return bits_.count(); }
  /// Number of active entries of feature f across all channels.
  std::size_t feature_count(std::size_t f) const;

  friend bool operator==(const BinaryTensor4&, const BinaryTensor4&) = default;

 private:
  std::size_t a_ = 0, f_ = 0, h_ = 0, w_ = 0;
  BitArray bits_;
};

/// Dense real-valued 3-D array (beliefs, bottom-up scores).
struct RealTensor3 {
  std::size_t f = 0, h = 0, w = 0;
  std::vector<double> data;

  RealTensor3() = default;
  RealTensor3(std::size_t f_, std::size_t h_, std::size_t w_, double v = 0.0)
      : f(f_), h(h_), w(w_), data(f_ * h_ * w_, v) {}

  double& operator()(std::size_t i, std::size_t r, std::size_t c) { return data[(i * h + r) * w + c]; }
  double operator()(std::size_t i, std::size_t r, std::size_t c) const { return data[(i * h + r) * w + c]; }
};

/// Entries with belief strictly above `threshold` become 1.
BinaryTensor3 threshold(const RealTensor3& beliefs, double threshold = 0.0);

std::size_t hamming(const BinaryTensor3& a, const BinaryTensor3& b);

}  // namespace hcn::model
