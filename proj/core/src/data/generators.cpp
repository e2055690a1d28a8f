#include "hcn/data/generators.hpp"

#include <algorithm>
#include <string>

#include "hcn/data/font.hpp"
#include "hcn/model/bconv.hpp"

namespace hcn::data {

using model::ShapeError;

learn::Labels Dataset::label_slots() const {
  learn::Labels slots;
  for (std::size_t k : labels) slots.emplace_back(k);
  return slots;
}

void Dataset::validate(std::size_t num_classes) const {
  for (const auto& x : images)
    if (!x.same_shape(images.front())) throw ShapeError("dataset images differ in shape");
  if (!labels.empty() && labels.size() != images.size()) throw ShapeError("one label per image is required");
  if (num_classes > 0)
    for (std::size_t k : labels)
      if (k >= num_classes) throw ShapeError("label " + std::to_string(k) + " out of range");
  if (!clean.empty() && clean.size() != images.size()) throw ShapeError("one clean image per image is required");
  if (!planted_top.empty() && planted_top.size() != images.size())
    throw ShapeError("one planted sparsification per image is required");
}

Dataset Dataset::head(std::size_t n) const {
  Dataset d = *this;
  auto cut = [n](auto& v) {
    if (v.size() > n) v.resize(n);
  };
  cut(d.images);
  cut(d.labels);
  cut(d.clean);
  cut(d.planted_top);
  return d;
}

BinaryTensor3 noisy_channel(const BinaryTensor3& clean, double p01, double p10, Rng& rng) {
  BinaryTensor3 x = clean;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const bool on = clean.at(i);
    x.set(i, on ? !rng.bernoulli(p01) : rng.bernoulli(p10));
  }
  return x;
}

BinaryTensor3 pool_shift(const BinaryTensor3& r, std::size_t pool_h, std::size_t pool_w, Rng& rng) {
  if (pool_h == 1 && pool_w == 1) return r;
  BinaryTensor3 out(r.features(), r.rows(), r.cols());
  const long hh = static_cast<long>(pool_h / 2), hw = static_cast<long>(pool_w / 2);
  std::vector<std::pair<long, long>> targets;
  for (std::size_t f = 0; f < r.features(); ++f) {
    for (std::size_t row = 0; row < r.rows(); ++row) {
      for (std::size_t col = 0; col < r.cols(); ++col) {
        if (!r(f, row, col)) continue;
        targets.clear();
        for (long dr = -hh; dr <= hh; ++dr) {
          for (long dc = -hw; dc <= hw; ++dc) {
            const long tr = static_cast<long>(row) + dr, tc = static_cast<long>(col) + dc;
            if (tr >= 0 && tc >= 0 && tr < static_cast<long>(r.rows()) && tc < static_cast<long>(r.cols()))
              targets.emplace_back(tr, tc);
          }
        }
        const auto [tr, tc] = targets[rng.below(targets.size())];
        out.set(f, static_cast<std::size_t>(tr), static_cast<std::size_t>(tc), true);
      }
    }
  }
  return out;
}

Dataset sample_hcn(const model::Architecture& arch, const model::Hyperparams& hyper, std::size_t n,
                   std::uint64_t seed, const std::vector<BinaryTensor4>* weights) {
  hyper.validate(arch);
  const auto shapes = model::layer_shapes(arch);
  const std::size_t depth = arch.num_layers();
  Rng rng(seed);

  Dataset d;
  d.name = "sampled";
  d.seed = seed;
  if (weights) {
    if (weights->size() != shapes.size()) throw ShapeError("one weight tensor per layer is required");
    d.planted = *weights;
  } else {
    d.planted.resize(shapes.size());
    for (std::size_t l = 1; l <= depth; ++l) {
      const auto& s = shapes[l];
      BinaryTensor4 w(s.below.features, s.sparse.features, s.feat_h, s.feat_w);
      for (std::size_t i = 0; i < w.size(); ++i) w.set(i, rng.bernoulli(hyper.pw[l - 1]));
      d.planted[l] = std::move(w);
    }
  }

  const model::Dims3 top = shapes[depth].sparse;
  for (std::size_t i = 0; i < n; ++i) {
    BinaryTensor3 s(top.features, top.rows, top.cols);
    if (arch.has_class_layer()) {
      const std::size_t k = rng.below(arch.num_classes);
      const std::size_t j = rng.below(arch.templates_per_class);
      s.set(k * arch.templates_per_class + j, 0, 0, true);
      d.labels.push_back(k);
    } else {
      for (std::size_t b = 0; b < s.size(); ++b) s.set(b, rng.bernoulli(hyper.ps));
    }
    d.planted_top.push_back(s);
    for (std::size_t l = depth; l >= 1; --l)
      s = pool_shift(model::bconv(s, d.planted[l]), shapes[l].pool_h, shapes[l].pool_w, rng);
    d.images.push_back(noisy_channel(s, hyper.p01, hyper.p10, rng));
    d.clean.push_back(std::move(s));
  }
  return d;
}

Dataset sample_single_layer(const model::Architecture& arch, const model::Hyperparams& hyper, std::size_t n,
                            std::uint64_t seed) {
  if (arch.num_layers() != 1 || arch.has_class_layer())
    throw ShapeError("single-layer sampling needs one layer and no class layer");
  return sample_hcn(arch, hyper, n, seed);
}

void stamp(BinaryTensor3& img, const std::vector<std::string>& glyph, std::size_t r, std::size_t c) {
  for (std::size_t i = 0; i < glyph.size(); ++i)
    for (std::size_t j = 0; j < glyph[i].size(); ++j)
      if (glyph[i][j] == '#') img.set(0, r + i, c + j, true);
}

BinaryTensor4 glyph_weights(std::span<const std::vector<std::string>> glyphs) {
  const std::size_t h = glyphs.front().size(), w = glyphs.front().front().size();
  BinaryTensor4 out(1, glyphs.size(), h, w);
  for (std::size_t g = 0; g < glyphs.size(); ++g) {
    if (glyphs[g].size() != h) throw ShapeError("glyphs differ in size");
    for (std::size_t i = 0; i < h; ++i) {
      if (glyphs[g][i].size() != w) throw ShapeError("glyphs differ in size");
      for (std::size_t j = 0; j < w; ++j) out.set(0, g, i, j, glyphs[g][i][j] == '#');
    }
  }
  return out;
}

std::vector<Placement> scatter(std::size_t h, std::size_t w, std::size_t glyph_h, std::size_t glyph_w,
                               std::size_t n_glyphs, std::size_t count, std::size_t gap, Rng& rng) {
  if (glyph_h > h || glyph_w > w) throw ShapeError("glyph larger than canvas");
  std::vector<Placement> out;
  std::vector<std::uint8_t> taken(h * w, 0);
  constexpr int kAttempts = 2000;
  for (std::size_t k = 0; k < count; ++k) {
    for (int attempt = 0; attempt < kAttempts; ++attempt) {
      const std::size_t r = rng.below(h - glyph_h + 1), c = rng.below(w - glyph_w + 1);
      const std::size_t r0 = r >= gap ? r - gap : 0, c0 = c >= gap ? c - gap : 0;
      const std::size_t r1 = std::min(h, r + glyph_h + gap), c1 = std::min(w, c + glyph_w + gap);
      bool free = true;
      for (std::size_t i = r0; i < r1 && free; ++i)
        for (std::size_t j = c0; j < c1 && free; ++j) free = !taken[i * w + j];
      if (!free) continue;
      for (std::size_t i = r; i < r + glyph_h; ++i)
        for (std::size_t j = c; j < c + glyph_w; ++j) taken[i * w + j] = 1;
      out.push_back({rng.below(n_glyphs), r, c});
      break;
    }
  }
  return out;
}

namespace {

// Renders placements of glyph set `glyphs` into one image and records the
// clean image, the planted top sparsification and weights.
void render_scene(Dataset& d, std::size_t h, std::size_t w, const std::vector<std::vector<std::string>>& glyphs,
                  const std::vector<Placement>& places, double flip, Rng& rng) {
  const std::size_t gh = glyphs.front().size(), gw = glyphs.front().front().size();
  BinaryTensor3 clean(1, h, w);
  BinaryTensor3 top(glyphs.size(), h - gh + 1, w - gw + 1);
  for (const auto& p : places) {
    stamp(clean, glyphs[p.glyph], p.row, p.col);
    top.set(p.glyph, p.row, p.col, true);
  }
  if (d.planted.empty()) d.planted = {BinaryTensor4(), glyph_weights(glyphs)};
  d.images.push_back(flip > 0.0 ? noisy_channel(clean, flip, flip, rng) : clean);
  d.clean.push_back(std::move(clean));
  d.planted_top.push_back(std::move(top));
}

std::vector<std::vector<std::string>> letters(std::string_view chars) {
  std::vector<std::vector<std::string>> out;
  for (char c : chars) out.push_back(font_glyph(c));
  return out;
}

}  // namespace

Dataset two_bars(std::uint64_t seed) {
  Rng rng(seed);
  const std::vector<std::vector<std::string>> bars{
      {".....", ".....", "#####", ".....", "....."},
      {"..#..", "..#..", "..#..", "..#..", "..#.."},
  };
  Dataset d;
  d.name = "two-bars";
  d.seed = seed;
  render_scene(d, 30, 30, bars, scatter(30, 30, 5, 5, bars.size(), 10, 0, rng), 0.03, rng);
  return d;
}

Dataset symbols(std::uint64_t seed) {
  Rng rng(seed);
  const std::vector<std::vector<std::string>> glyphs{
      {"...##...", "...##...", "...##...", "########", "########", "...##...", "...##...", "...##..."},
      {"########", "#......#", "#......#", "#......#", "#......#", "#......#", "#......#", "########"},
      {"#......#", "##....##", ".##..##.", "..####..", "..####..", ".##..##.", "##....##", "#......#"},
      {"...##...", "...##...", "..#..#..", "..#..#..", ".#....#.", ".#....#.", "########", "########"},
  };
  Dataset d;
  d.name = "symbols";
  d.seed = seed;
  render_scene(d, 100, 100, glyphs, scatter(100, 100, 8, 8, glyphs.size(), 72, 0, rng), 0.0, rng);
  return d;
}

Dataset text_lines(std::uint64_t seed) {
  Rng rng(seed);
  const std::string alphabet = "ACEHNOST";
  const std::vector<std::string> words{"THE", "CAT", "SAT", "ON", "HAT", "NOTE", "TEN", "NET", "SEA", "EAST",
                                       "ONCE", "NOSE", "COAST", "CHASE", "STONE", "TO"};
  const auto glyphs = letters(alphabet);
  constexpr std::size_t kRows = 64, kCols = 96, kLine = kFontRows + 2, kAdvance = kFontCols + 1;
  std::vector<Placement> places;
  for (std::size_t line = 0; (line + 1) * kLine <= kRows + 2; ++line) {
    std::size_t col = 0;
    for (;;) {
      const std::string& word = words[rng.below(words.size())];
      if ((col + word.size()) * kAdvance > kCols + 1) break;
      for (char ch : word) places.push_back({alphabet.find(ch), line * kLine, (col++) * kAdvance});
      ++col;
    }
  }
  Dataset d;
  d.name = "text";
  d.seed = seed;
  render_scene(d, kRows, kCols, glyphs, places, 0.0, rng);
  return d;
}

Dataset letter_stream(std::size_t n, std::size_t count, std::uint64_t seed, double flip) {
  Rng rng(seed);
  const auto glyphs = letters("AEKOST");
  Dataset d;
  d.name = flip > 0.0 ? "noisy-letters" : "clean-letters";
  d.seed = seed;
  for (std::size_t i = 0; i < n; ++i)
    render_scene(d, 24, 24, glyphs, scatter(24, 24, kFontRows, kFontCols, glyphs.size(), count, 1, rng), flip, rng);
  return d;
}

Dataset planted_features(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  constexpr std::size_t kF = 4, kSize = 5, kImage = 20;
  BinaryTensor4 w(1, kF, kSize, kSize);
  for (std::size_t f = 0; f < kF;) {
    for (std::size_t i = 0; i < kSize * kSize; ++i) w.set(0, f, i / kSize, i % kSize, rng.bernoulli(0.4));
    const std::size_t c = w.feature_count(f);
    bool distinct = c >= 7 && c <= 15;
    for (std::size_t g = 0; g < f && distinct; ++g) {
      std::size_t diff = 0;
      for (std::size_t i = 0; i < kSize * kSize; ++i)
        diff += w(0, f, i / kSize, i % kSize) != w(0, g, i / kSize, i % kSize);
      distinct = diff >= 6;
    }
    if (distinct) ++f;
  }

  model::Architecture arch{{1, kImage, kImage}, {{kF, kSize, kSize, 1, 1}}, 0, 1};
  model::Hyperparams hyper;
  hyper.p01 = hyper.p10 = 0.03;
  const std::size_t positions = kF * (kImage - kSize + 1) * (kImage - kSize + 1);
  hyper.ps = 8.0 / static_cast<double>(positions);
  hyper.pw = {0.4};
  const std::vector<BinaryTensor4> weights{BinaryTensor4(), w};
  Dataset d = sample_hcn(arch, hyper, n, rng.next(), &weights);
  d.name = "planted";
  d.seed = seed;
  return d;
}

}  // namespace hcn::data
