#include "hcn/model/pooling.hpp"

namespace hcn::model {

PoolMap pooling_connectivity(const Dims3& dims, std::size_t pool_h, std::size_t pool_w) {
  if (pool_h % 2 == 0 || pool_w % 2 == 0) throw ShapeError("pool dimensions must be odd");
  PoolMap map;
  map.dims = dims;
  map.pool_h = pool_h;
  map.pool_w = pool_w;
  const auto half_h = static_cast<long>(pool_h / 2), half_w = static_cast<long>(pool_w / 2);
  const auto rows = static_cast<long>(dims.rows), cols = static_cast<long>(dims.cols);

  map.source_begin.reserve(dims.size() + 1);
  std::vector<std::uint32_t> per_target(dims.size(), 0);
  for (std::size_t f = 0; f < dims.features; ++f) {
    for (long r = 0; r < rows; ++r) {
      for (long c = 0; c < cols; ++c) {
        map.source_begin.push_back(static_cast<std::uint32_t>(map.link_target.size()));
        for (long dr = -half_h; dr <= half_h; ++dr) {
          for (long dc = -half_w; dc <= half_w; ++dc) {
            const long tr = r + dr, tc = c + dc;
            if (tr < 0 || tr >= rows || tc < 0 || tc >= cols) continue;
            const auto target = static_cast<std::uint32_t>((f * dims.rows + static_cast<std::size_t>(tr)) * dims.cols +
                                                           static_cast<std::size_t>(tc));
            map.link_target.push_back(target);
            map.link_shift.push_back(static_cast<std::uint16_t>((dr + half_h) * static_cast<long>(pool_w) + dc + half_w));
            ++per_target[target];
          }
        }
      }
    }
  }
  map.source_begin.push_back(static_cast<std::uint32_t>(map.link_target.size()));

  map.target_begin.assign(dims.size() + 1, 0);
  for (std::size_t j = 0; j < dims.size(); ++j) map.target_begin[j + 1] = map.target_begin[j] + per_target[j];
  map.target_link.resize(map.link_target.size());
  std::vector<std::uint32_t> fill(map.target_begin.begin(), map.target_begin.end() - 1);
  for (std::uint32_t link = 0; link < map.link_target.size(); ++link) {
    map.target_link[fill[map.link_target[link]]++] = link;
  }
  return map;
}

}  // namespace hcn::model
