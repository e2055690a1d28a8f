#include <gtest/gtest.h>

#include <filesystem>
#include <random>
#include <string>

#include "hcn/data/config.hpp"
#include "hcn/data/generators.hpp"
#include "hcn/data/io.hpp"
#include "hcn/data/presets.hpp"
#include "hcn/infer/infer.hpp"

using namespace hcn;
using data::IoError;
using model::BinaryTensor3;
using model::BinaryTensor4;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("hcn_io_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

BinaryTensor3 random_tensor(std::mt19937_64& gen, std::size_t f, std::size_t h, std::size_t w) {
  BinaryTensor3 t(f, h, w);
  for (std::size_t i = 0; i < t.size(); ++i) t.set(i, gen() % 2);
  return t;
}

std::string u32le(std::uint32_t v) {
  std::string s(4, '\0');
  for (int i = 0; i < 4; ++i) s[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  return s;
}

}  // namespace

TEST(Weights, SingleBitFileLayout) {
  BinaryTensor4 w(1, 1, 1, 1);
  w.set(0, true);
  const std::string bytes = data::encode_weights(w);
  // 5 magic + 4 x u32 dims + 1 payload byte
  ASSERT_EQ(bytes.size(), 5u + 16 + 1);
  EXPECT_EQ(bytes.substr(0, 5), "HCNW1");
  EXPECT_EQ(bytes.substr(5, 16), u32le(1) + u32le(1) + u32le(1) + u32le(1));
  EXPECT_EQ(static_cast<unsigned char>(bytes[21]), 0x80);
}

TEST(Weights, LayoutAndRoundTrip) {
  BinaryTensor4 w(2, 3, 1, 3);
  w.set(0, 0, 0, 1, true);  // bit 1
  w.set(1, 2, 0, 2, true);  // bit 17
  const std::string bytes = data::encode_weights(w);
  ASSERT_EQ(bytes.size(), 5u + 16 + 3);
  EXPECT_EQ(bytes.substr(5, 16), u32le(2) + u32le(3) + u32le(1) + u32le(3));
  EXPECT_EQ(static_cast<unsigned char>(bytes[21]), 0x40);
  EXPECT_EQ(static_cast<unsigned char>(bytes[22]), 0x00);
  EXPECT_EQ(static_cast<unsigned char>(bytes[23]), 0x40);
  EXPECT_EQ(data::decode_weights(bytes), w);
}

TEST(Weights, Errors) {
  const std::string good = data::encode_weights(BinaryTensor4(1, 2, 3, 3));
  EXPECT_THROW(data::decode_weights("HCNW2" + good.substr(5)), IoError);
  EXPECT_THROW(data::decode_weights(good.substr(0, 12)), IoError);
  EXPECT_THROW(data::decode_weights(good.substr(0, good.size() - 1)), IoError);
  EXPECT_THROW(data::decode_weights(good + "x"), IoError);
  const std::string huge = "HCNW1" + u32le(0xffffffffU) + u32le(0xffffffffU) + u32le(4) + u32le(4);
  EXPECT_THROW(data::decode_weights(huge), IoError);
}

TEST(Weights, FileRoundTrip) {
  const fs::path dir = scratch_dir("weights");
  BinaryTensor4 w(3, 2, 4, 5);
  std::mt19937_64 gen(1);
  for (std::size_t i = 0; i < w.size(); ++i) w.set(i, gen() % 2);
  data::save_weights(dir / "w.hcnw", w);
  EXPECT_EQ(data::load_weights(dir / "w.hcnw"), w);
  EXPECT_THROW(data::load_weights(dir / "missing.hcnw"), IoError);
}

TEST(Pbm, PlainAndRawAgree) {
  std::mt19937_64 gen(2);
  for (std::size_t w : {1u, 7u, 8u, 9u, 17u}) {
    const auto t = random_tensor(gen, 1, 5, w);
    const auto plain = data::format_pbm(t, data::PbmEncoding::Plain);
    const auto raw = data::format_pbm(t, data::PbmEncoding::Raw);
    EXPECT_EQ(plain.substr(0, 2), "P1");
    EXPECT_EQ(raw.substr(0, 2), "P4");
    EXPECT_EQ(data::parse_pbm(plain), t);
    EXPECT_EQ(data::parse_pbm(raw), t);
  }
}

TEST(Pbm, ExactBytes) {
  BinaryTensor3 t(1, 2, 3);
  t.set(0, 0, 0, true);
  t.set(0, 1, 2, true);
  EXPECT_EQ(data::format_pbm(t, data::PbmEncoding::Raw), std::string("P4\n3 2\n") + '\x80' + '\x20');
  EXPECT_EQ(data::parse_pbm("P1\n# comment\n3 2\n1 0 0\n0 0 1\n"), t);
  EXPECT_EQ(data::parse_pbm("P1 3 2 100001"), t);
}

TEST(Pbm, Malformed) {
  EXPECT_THROW(data::parse_pbm("P2\n3 2\n"), IoError);
  EXPECT_THROW(data::parse_pbm("P1\n3\n"), IoError);
  EXPECT_THROW(data::parse_pbm("P1\n3 2\n1 0 1\n0"), IoError);
  EXPECT_THROW(data::parse_pbm("P4\n9 2\n\xff"), IoError);
  EXPECT_THROW(data::parse_pbm("P4\n99999999999 99999999999\n"), IoError);
}

TEST(Tensor, DirectoryRoundTrip) {
  std::mt19937_64 gen(3);
  const auto t = random_tensor(gen, 3, 6, 11);
  const fs::path dir = scratch_dir("tensor");
  data::save_tensor(dir / "t", t);
  EXPECT_TRUE(fs::exists(dir / "t" / "channel_2.pbm"));
  EXPECT_EQ(data::load_tensor(dir / "t"), t);
}

TEST(Model, RoundTripReproducesClassification) {
  std::mt19937_64 gen(4);
  model::Architecture a;
  a.image = {1, 7, 7};
  a.layers = {{3, 3, 3, 3, 3}, {4, 5, 5, 3, 3}};
  a.num_classes = 2;
  a.templates_per_class = 2;
  model::Hyperparams h;
  h.pw = {0.3, 0.2};
  h.seed = 99;
  auto m = learn::empty_model(a, h);
  for (std::size_t l = 1; l < m.weights.size(); ++l)
    for (std::size_t i = 0; i < m.weights[l].size(); ++i) m.weights[l].set(i, gen() % 3 == 0);
  const fs::path dir = scratch_dir("model");
  data::save_model(dir, m);
  const auto back = data::load_model(dir);
  EXPECT_EQ(back, m);
  for (int i = 0; i < 5; ++i) {
    const auto x = random_tensor(gen, 1, 7, 7);
    EXPECT_EQ(infer::classify_forward(x, back).templates, infer::classify_forward(x, m).templates);
  }
  // weights that disagree with the architecture
  data::save_weights(dir / "layer_1.hcnw", BinaryTensor4(1, 3, 2, 3));
  EXPECT_THROW(data::load_model(dir), std::exception);
}

TEST(Dataset, RoundTripWithSideArrays) {
  const auto d = data::planted_features(3, 5);
  const fs::path dir = scratch_dir("dataset");
  data::save_dataset(dir, d);
  const auto back = data::load_dataset(dir);
  EXPECT_EQ(back.images, d.images);
  EXPECT_EQ(back.clean, d.clean);
  EXPECT_EQ(back.planted, d.planted);
  EXPECT_EQ(back.planted_top, d.planted_top);
  EXPECT_EQ(back.seed, d.seed);
  EXPECT_EQ(back.name, d.name);
}

TEST(Dataset, SameSeedSameBytes) {
  const auto p = data::preset("two-bars");
  const fs::path a = scratch_dir("bytes_a"), b = scratch_dir("bytes_b");
  data::save_dataset(a, data::generate_preset(p, 7).train);
  data::save_dataset(b, data::generate_preset(p, 7).train);
  for (const auto& e : fs::recursive_directory_iterator(a)) {
    if (!e.is_regular_file()) continue;
    const auto rel = fs::relative(e.path(), a);
    EXPECT_EQ(data::read_file(e.path()), data::read_file(b / rel)) << rel;
  }
}

TEST(Grid, TilesWithGaps) {
  std::vector<BinaryTensor3> tiles(3, BinaryTensor3(1, 2, 2));
  for (auto& t : tiles) t.set(0, 0, 0, true);
  const auto g = data::tile_grid(tiles, 2);
  EXPECT_EQ(g.rows(), 2u * 2 + 1);
  EXPECT_EQ(g.cols(), 2u * 2 + 1);
  EXPECT_TRUE(g(0, 0, 0));
  EXPECT_TRUE(g(0, 0, 3));
  EXPECT_TRUE(g(0, 3, 0));
  EXPECT_EQ(g.count(), 3u);
}

TEST(Idx, ReadsImagesAndLabels) {
  const fs::path dir = scratch_dir("idx");
  std::string img{'\0', '\0', '\x08', '\x03'};
  auto be32 = [](std::uint32_t v) {
    return std::string{static_cast<char>(v >> 24), static_cast<char>(v >> 16), static_cast<char>(v >> 8),
                       static_cast<char>(v)};
  };
  img += be32(2) + be32(2) + be32(2);
  img += std::string{'\xff', '\x00', '\x7f', '\x80'};
  img += std::string{'\x00', '\x00', '\x00', '\xc8'};
  data::write_file(dir / "img.idx", img);
  std::string lab{'\0', '\0', '\x08', '\x01'};
  lab += be32(2) + std::string{'\x07', '\x03'};
  data::write_file(dir / "lab.idx", lab);

  const auto xs = data::load_idx_images(dir / "img.idx");
  ASSERT_EQ(xs.size(), 2u);
  EXPECT_TRUE(xs[0](0, 0, 0));
  EXPECT_FALSE(xs[0](0, 1, 0));
  EXPECT_TRUE(xs[0](0, 1, 1));
  EXPECT_EQ(xs[1].count(), 1u);
  EXPECT_EQ(data::load_idx_images(dir / "img.idx", 1).size(), 1u);
  EXPECT_EQ(data::load_idx_labels(dir / "lab.idx"), (std::vector<std::size_t>{7, 3}));
  data::write_file(dir / "short.idx", img.substr(0, img.size() - 1));
  EXPECT_THROW(data::load_idx_images(dir / "short.idx"), IoError);
}

TEST(Config, RoundTrip) {
  const auto p = data::preset("shapes-online");
  const nlohmann::json j = p.hyper;
  const auto h = j.get<model::Hyperparams>();
  EXPECT_EQ(nlohmann::json(h), j);
  EXPECT_EQ(h.schedule, p.hyper.schedule);
  EXPECT_EQ(h.pw, p.hyper.pw);
  const nlohmann::json ja = p.arch;
  EXPECT_EQ(ja.get<model::Architecture>(), p.arch);
}

TEST(Config, RejectsUnknownKeysAndTypes) {
  EXPECT_THROW(nlohmann::json::parse(R"({"p01": 0.1, "bogus": 1})").get<model::Hyperparams>(), data::ConfigError);
  EXPECT_THROW(nlohmann::json::parse(R"({"p01": "x"})").get<model::Hyperparams>(), data::ConfigError);
  EXPECT_THROW(nlohmann::json::parse(R"({"schedule": "sometimes"})").get<model::Hyperparams>(), data::ConfigError);
  const auto h = nlohmann::json::parse(R"({"alpha": 0.5})").get<model::Hyperparams>();
  EXPECT_EQ(h.alpha, 0.5);
  EXPECT_EQ(h.p01, model::Hyperparams{}.p01);
}
