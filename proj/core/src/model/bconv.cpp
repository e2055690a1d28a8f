#include "hcn/model/bconv.hpp"

#include <string>

namespace hcn::model {

BinaryTensor3 bconv(const BinaryTensor3& s, const BinaryTensor4& w) {
  if (s.features() != w.features())
    throw ShapeError("bconv: S has " + std::to_string(s.features()) + " features, W has " +
                     std::to_string(w.features()));
  BinaryTensor3 r(w.channels(), s.rows() + w.rows() - 1, s.cols() + w.cols() - 1);
  for (std::size_t f = 0; f < s.features(); ++f) {
    for (std::size_t sr = 0; sr < s.rows(); ++sr) {
      for (std::size_t sc = 0; sc < s.cols(); ++sc) {
        if (!s(f, sr, sc)) continue;
        for (std::size_t a = 0; a < w.channels(); ++a)
          for (std::size_t dr = 0; dr < w.rows(); ++dr)
            for (std::size_t dc = 0; dc < w.cols(); ++dc)
              if (w(a, f, dr, dc)) r.set(a, sr + dr, sc + dc, true);
      }
    }
  }
  return r;
}

}  // namespace hcn::model
