#pragma once

#include <stdexcept>

#include "hcn/model/tensor.hpp"

namespace hcn::model {

class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Binary convolution R = min(1, sum_f conv2D(S_f, W_{a,f})), full extent:
/// rows(R) = rows(S) + rows(W) - 1. Feature f placed at (r, c) puts its
/// top-left corner at (r, c): R[a, r+dr, c+dc] |= S[f, r, c] & W[a, f, dr, dc].
BinaryTensor3 bconv(const BinaryTensor3& s, const BinaryTensor4& w);

}  // namespace hcn::model
