#include "hcn/data/presets.hpp"

#include <array>

#include "hcn/data/config.hpp"
#include "hcn/data/font.hpp"
#include "hcn/data/generators.hpp"
#include "hcn/data/shapes.hpp"

namespace hcn::data {

namespace {

const std::array<std::string, 7> kNames{"two-bars", "symbols", "clean-letters", "noisy-letters",
                                        "text",     "shapes",  "shapes-online"};

constexpr std::size_t kLetterImages = 30;
constexpr std::size_t kLettersPerImage = 5;

model::Architecture single_layer(std::size_t rows, std::size_t cols, std::size_t features, std::size_t fh,
                                 std::size_t fw) {
  return {{1, rows, cols}, {{features, fh, fw, 1, 1}}, 0, 1};
}

model::Hyperparams single_layer_hyper(double flip, double ps, double pw) {
  model::Hyperparams h;
  h.p01 = h.p10 = flip;
  h.ps = ps;
  h.pw = {pw};
  h.alpha = 0.8;
  h.epochs = 100;
  return h;
}

}  // namespace

std::span<const std::string> preset_names() { return kNames; }

Preset preset(const std::string& name) {
  Preset p;
  p.name = name;
  if (name == "two-bars") {
    p.arch = single_layer(30, 30, 3, 5, 5);
    p.hyper = single_layer_hyper(0.03, 0.004, 0.3);
  } else if (name == "symbols") {
    p.arch = single_layer(100, 100, 6, 8, 8);
    p.hyper = single_layer_hyper(0.01, 0.002, 0.3);
  } else if (name == "clean-letters" || name == "noisy-letters") {
    p.arch = single_layer(24, 24, 8, kFontRows, kFontCols);
    p.hyper = single_layer_hyper(name == "noisy-letters" ? 0.03 : 0.01, 0.002, 0.3);
    p.n_train = kLetterImages;
  } else if (name == "text") {
    p.arch = single_layer(64, 96, 10, kFontRows, kFontCols);
    p.hyper = single_layer_hyper(0.01, 0.002, 0.3);
  } else if (name == "shapes" || name == "shapes-online") {
    p.arch = shapes_architecture();
    p.hyper.p01 = p.hyper.p10 = 1e-3;
    p.hyper.ps = 0.05;
    p.hyper.pw = {0.12, 0.02};
    p.hyper.alpha = 0.8;
    p.hyper.epochs = 100;
    p.supervised = true;
    p.n_train = 100;
    p.n_test = 10000;
    if (name == "shapes-online") {
      p.online = true;
      p.hyper.alpha = 1.0;
      p.hyper.lambda = 0.95;
      p.hyper.minibatch = 5;
      p.hyper.epochs = 10;
    }
  } else {
    throw ConfigError("unknown preset '" + name + "'");
  }
  p.arch.validate();
  p.hyper.validate(p.arch);
  return p;
}

Split generate_preset(const Preset& p, std::uint64_t seed) {
  const std::string& n = p.name;
  if (n == "two-bars") return {two_bars(seed), {}};
  if (n == "symbols") return {symbols(seed), {}};
  if (n == "text") return {text_lines(seed), {}};
  if (n == "clean-letters") return {letter_stream(p.n_train, kLettersPerImage, seed, 0.0), {}};
  if (n == "noisy-letters") return {letter_stream(p.n_train, kLettersPerImage, seed, 0.03), {}};
  if (n == "shapes" || n == "shapes-online") {
    auto d = gen_shapes_dataset(p.n_train, p.n_test, seed);
    return {std::move(d.train), std::move(d.test)};
  }
  throw ConfigError("unknown preset '" + n + "'");
}

}  // namespace hcn::data
