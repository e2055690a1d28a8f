#include "hcn/data/shapes.hpp"

#include "hcn/data/generators.hpp"

namespace hcn::data {

const std::vector<std::vector<std::string>>& shape_traits() {
  static const std::vector<std::vector<std::string>> traits{
      {"####.....####",
       "#...........#",
       "#...........#",
       "#...........#",
       ".............",
       ".............",
       ".............",
       ".............",
       ".............",
       "#...........#",
       "#...........#",
       "#...........#",
       "####.....####"},
      {".............",
       "....#####....",
       "...#.....#...",
       "..#.......#..",
       ".#.........#.",
       ".#.........#.",
       ".#.........#.",
       ".#.........#.",
       ".#.........#.",
       "..#.......#..",
       "...#.....#...",
       "....#####....",
       "............."},
      {"............#",
       "...........#.",
       "..........#..",
       ".........#...",
       "........#....",
       ".......#.....",
       "......#......",
       ".....#.......",
       "....#........",
       "...#.........",
       "..#..........",
       ".#...........",
       "#............"},
      {"#............",
       ".#...........",
       "..#..........",
       "...#.........",
       "....#........",
       ".....#.......",
       "......#......",
       ".......#.....",
       "........#....",
       ".........#...",
       "..........#..",
       "...........#.",
       "............#"},
  };
  return traits;
}

model::Architecture shapes_architecture(bool jitter) {
  const std::size_t pool = jitter ? 3 : 1;
  return {{1, kShapeImage, kShapeImage},
          {{kShapeTraits, kShapeTrait, kShapeTrait, pool, pool}, {kShapeClasses * kShapeTemplatesPerClass, 5, 5, pool, pool}},
          kShapeClasses,
          kShapeTemplatesPerClass};
}

std::size_t shape_template(std::size_t shape, std::size_t diagonal) {
  const std::size_t cls = shape ^ diagonal;
  return cls * kShapeTemplatesPerClass + shape;
}

std::vector<model::BinaryTensor4> shapes_weights() {
  const auto& traits = shape_traits();
  model::BinaryTensor4 w2(kShapeTraits, kShapeClasses * kShapeTemplatesPerClass, 5, 5);
  for (std::size_t shape = 0; shape < 2; ++shape) {
    for (std::size_t diag = 0; diag < 2; ++diag) {
      const std::size_t t = shape_template(shape, diag);
      w2.set(shape, t, 2, 2, true);
      w2.set(2 + diag, t, 2, 2, true);
    }
  }
  return {model::BinaryTensor4(), glyph_weights(traits), w2};
}

ShapesData gen_shapes_dataset(std::size_t n_train, std::size_t n_test, std::uint64_t seed,
                              const ShapesOptions& options) {
  const auto arch = shapes_architecture(options.jitter);
  model::Hyperparams hyper;
  hyper.p01 = hyper.p10 = options.flip > 0.0 ? options.flip : 0.25;
  hyper.pw = {0.5, 0.5};
  const auto weights = shapes_weights();
  Rng streams(seed);
  ShapesData out{sample_hcn(arch, hyper, n_train, streams.next(), &weights),
                 sample_hcn(arch, hyper, n_test, streams.next(), &weights)};
  out.train.name = "shapes-train";
  out.test.name = "shapes-test";
  out.train.seed = out.test.seed = seed;
  if (options.flip <= 0.0) {
    out.train.images = out.train.clean;
    out.test.images = out.test.clean;
  }
  return out;
}

std::vector<std::size_t> planted_templates(const Dataset& d) {
  std::vector<std::size_t> out;
  for (const auto& top : d.planted_top) {
    std::size_t t = 0;
    while (t < top.size() && !top.at(t)) ++t;
    out.push_back(t);
  }
  return out;
}

}  // namespace hcn::data
