#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "hcn/model/architecture.hpp"

namespace hcn::model {

/// Connectivity of one pooling layer over a features x rows x cols array.
/// Element (f, r, c) of R shifted by (dr, dc) lands on S^{l-1}(f, r+dr, c+dc);
/// shifts range over the centred pool_h x pool_w window and shifts leaving the
/// array are dropped, so pools shrink at the borders.
struct PoolMap {
  Dims3 dims;
  std::size_t pool_h = 1;
  std::size_t pool_w = 1;

  // Per R element i: links source_begin[i] .. source_begin[i+1].
  std::vector<std::uint32_t> source_begin;
  std::vector<std::uint32_t> link_target;  // flat S^{l-1} index
  std::vector<std::uint16_t> link_shift;   // (dr + pool_h/2) * pool_w + (dc + pool_w/2)

  // Per S^{l-1} cell j: the links ORed into it, target_begin[j] .. target_begin[j+1].
  std::vector<std::uint32_t> target_begin;
  std::vector<std::uint32_t> target_link;  // index into link_*

  std::size_t num_links() const { return link_target.size(); }
  std::size_t pool_size(std::size_t i) const { return source_begin[i + 1] - source_begin[i]; }
  std::size_t or_size(std::size_t j) const { return target_begin[j + 1] - target_begin[j]; }
  std::uint16_t center_shift() const { return static_cast<std::uint16_t>((pool_h / 2) * pool_w + pool_w / 2); }
};

/// Throws ShapeError for even pool dimensions.
PoolMap pooling_connectivity(const Dims3& dims, std::size_t pool_h, std::size_t pool_w);

}  // namespace hcn::model
