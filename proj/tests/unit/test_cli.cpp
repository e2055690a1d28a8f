#include <gtest/gtest.h>

#include <filesystem>
#include <nlohmann/json.hpp>
#include <sstream>

#include "hcn/cli/cli.hpp"
#include "hcn/data/generators.hpp"
#include "hcn/data/io.hpp"

using namespace hcn;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("hcn_cli_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

struct Result {
  int code;
  std::string out, err;
};

Result hcn_run(std::vector<std::string> args) {
  args.insert(args.begin(), "hcn");
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

json read_json(const fs::path& p) { return json::parse(data::read_file(p)); }

// planted single-layer data plus a config for learning it
fs::path planted_setup(const fs::path& dir, std::size_t n) {
  data::save_dataset(dir / "data", data::planted_features(n, 8));
  const json cfg{{"architecture", {{"image", {1, 20, 20}}, {"layers", {{{"features", 4}, {"feat_h", 5}, {"feat_w", 5},
                                                                        {"pool_h", 1}, {"pool_w", 1}}}}}},
                 {"hyperparams", {{"ps", 8.0 / 1024}, {"pw", {0.4}}, {"epochs", 1}, {"seed", 21}}},
                 {"data", (dir / "data").string()}};
  data::write_file(dir / "config.json", cfg.dump());
  return dir / "config.json";
}

}  // namespace

TEST(Cli, GenerateSameSeedSameBytes) {
  const fs::path a = scratch_dir("gen_a"), b = scratch_dir("gen_b");
  ASSERT_EQ(hcn_run({"generate", "--preset", "two-bars", "--seed", "5", "--out", a.string()}).code, 0);
  ASSERT_EQ(hcn_run({"generate", "--preset", "two-bars", "--seed", "5", "--out", b.string()}).code, 0);
  std::size_t files = 0;
  for (const auto& e : fs::recursive_directory_iterator(a)) {
    if (!e.is_regular_file() || e.path().filename() == "config.json") continue;
    const auto rel = fs::relative(e.path(), a);
    EXPECT_EQ(data::read_file(e.path()), data::read_file(b / rel)) << rel;
    ++files;
  }
  EXPECT_GT(files, 2u);
  EXPECT_EQ(read_json(a / "config.json")["seed"], 5);
  EXPECT_EQ(read_json(a / "config.json")["hyperparams"]["seed"], 5);
}

TEST(Cli, InvalidConfigurationExitsTwo) {
  const fs::path dir = scratch_dir("bad");
  const json even{{"preset", "two-bars"},
                  {"architecture", {{"layers", {{{"features", 3}, {"feat_h", 5}, {"feat_w", 5},
                                                 {"pool_h", 2}, {"pool_w", 1}}}}}}};
  data::write_file(dir / "even.json", even.dump());
  auto r = hcn_run({"generate", "--config", (dir / "even.json").string(), "--out", (dir / "o").string()});
  EXPECT_EQ(r.code, cli::kExitConfig);
  EXPECT_FALSE(r.err.empty());

  data::write_file(dir / "broken.json", "{\"preset\": ");
  EXPECT_EQ(hcn_run({"generate", "--config", (dir / "broken.json").string()}).code, cli::kExitConfig);
  data::write_file(dir / "unknown.json", R"({"preset": "two-bars", "colour": 1})");
  EXPECT_EQ(hcn_run({"generate", "--config", (dir / "unknown.json").string()}).code, cli::kExitConfig);
  EXPECT_EQ(hcn_run({"generate", "--preset", "nope"}).code, cli::kExitConfig);
  EXPECT_EQ(hcn_run({"train", "--preset", "two-bars", "--damping", "1.5"}).code, cli::kExitConfig);
  EXPECT_EQ(hcn_run({"frobnicate"}).code, cli::kExitConfig);
  EXPECT_EQ(hcn_run({}).code, cli::kExitConfig);
  EXPECT_EQ(hcn_run({"classify"}).code, cli::kExitConfig);
}

TEST(Cli, MissingFilesExitOne) {
  const fs::path dir = scratch_dir("missing");
  EXPECT_EQ(hcn_run({"classify", "--model", (dir / "none").string(), "--out", (dir / "o").string()}).code,
            cli::kExitRuntime);
}

TEST(Cli, HelpExitsZero) {
  const auto r = hcn_run({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("train"), std::string::npos);
}

TEST(Cli, ZeroEpochsGiveEmptyModel) {
  const fs::path dir = scratch_dir("zero");
  const fs::path cfg = planted_setup(dir, 3);
  const auto r = hcn_run({"train", "--config", cfg.string(), "--epochs", "0", "--out", (dir / "o").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto m = data::load_model(dir / "o" / "model");
  EXPECT_EQ(m.weights[1].count(), 0u);
  const json metrics = read_json(dir / "o" / "metrics.json");
  EXPECT_EQ(metrics["epochs_run"], 0);
  EXPECT_TRUE(metrics["compression"].is_object());
  EXPECT_TRUE(fs::exists(dir / "o" / "features_layer1.pbm"));
}

TEST(Cli, FullMinibatchOnlineMatchesSingleVisitBatch) {
  const fs::path dir = scratch_dir("online");
  const fs::path cfg = planted_setup(dir, 3);
  ASSERT_EQ(hcn_run({"train", "--config", cfg.string(), "--online", "--lambda", "1", "--out", (dir / "on").string()})
                .code,
            0);
  // minibatch defaults to 5, more than the 3 images
  json batch_cfg = read_json(cfg);
  batch_cfg["hyperparams"]["schedule"] = "single_visit";
  data::write_file(dir / "batch.json", batch_cfg.dump());
  ASSERT_EQ(hcn_run({"train", "--config", (dir / "batch.json").string(), "--out", (dir / "batch").string()}).code, 0);
  EXPECT_EQ(data::read_file(dir / "on" / "model" / "layer_1.hcnw"),
            data::read_file(dir / "batch" / "model" / "layer_1.hcnw"));
  EXPECT_EQ(read_json(dir / "on" / "metrics.json")["mode"], "online");
}

TEST(Cli, TrainClassifyInpaintEval) {
  const fs::path dir = scratch_dir("flow");
  const fs::path cfg = planted_setup(dir, 6);
  ASSERT_EQ(hcn_run({"train", "--config", cfg.string(), "--epochs", "3", "--out", (dir / "t").string()}).code, 0);
  const std::string model = (dir / "t" / "model").string();
  const auto e = hcn_run({"eval", "--model", model, "--data", (dir / "data").string(), "--out", (dir / "e").string()});
  ASSERT_EQ(e.code, 0) << e.err;
  EXPECT_TRUE(read_json(dir / "e" / "metrics.json")["compression"]["percent"].is_number());
  // no class layer
  EXPECT_EQ(hcn_run({"classify", "--model", model, "--data", (dir / "data").string(), "--out", (dir / "c").string()}).code,
            cli::kExitConfig);

  const auto none = hcn_run({"inpaint", "--model", model, "--data", (dir / "data").string(), "--mask-block", "0",
                             "--out", (dir / "i0").string()});
  ASSERT_EQ(none.code, 0) << none.err;
  const json m0 = read_json(dir / "i0" / "metrics.json");
  EXPECT_EQ(m0["masked_pixels"], 0);
  EXPECT_EQ(m0["masked_pixel_accuracy"], 1.0);
  EXPECT_TRUE(m0["observed_unchanged"].get<bool>());

  const auto six = hcn_run({"inpaint", "--model", model, "--data", (dir / "data").string(), "--out",
                            (dir / "i6").string()});
  ASSERT_EQ(six.code, 0) << six.err;
  const json m6 = read_json(dir / "i6" / "metrics.json");
  EXPECT_EQ(m6["masked_pixels"], 6 * 36);
  EXPECT_TRUE(m6["observed_unchanged"].get<bool>());
  EXPECT_EQ(data::load_dataset(dir / "i6" / "inpainted").size(), 6u);
}

TEST(Cli, ClassifyReportsConfusion) {
  const fs::path dir = scratch_dir("classify");
  data::write_file(dir / "small.json", R"({"preset": "shapes", "n_test": 40})");
  ASSERT_EQ(hcn_run({"generate", "--config", (dir / "small.json").string(), "--out", (dir / "g").string()}).code, 0);
  ASSERT_EQ(hcn_run({"train", "--preset", "shapes", "--data", (dir / "g" / "train").string(), "--epochs", "1",
                     "--limit", "8", "--out", (dir / "t").string()})
                .code,
            0);
  const auto r = hcn_run({"classify", "--model", (dir / "t" / "model").string(), "--data",
                          (dir / "g" / "test").string(), "--limit", "20", "--out", (dir / "c").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const json m = read_json(dir / "c" / "metrics.json");
  EXPECT_EQ(m["images"], 20);
  EXPECT_EQ(m["confusion"].size(), 2u);
  EXPECT_TRUE(m["error_rate"].is_number());
  EXPECT_TRUE(m.contains("clustering_error_rate"));
  EXPECT_EQ(read_json(dir / "c" / "scores.json").size(), 20u);
}
