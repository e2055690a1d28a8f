#include "hcn/cli/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <ostream>

#include "hcn/data/config.hpp"
#include "hcn/data/generators.hpp"
#include "hcn/data/io.hpp"
#include "hcn/data/presets.hpp"
#include "hcn/data/shapes.hpp"
#include "hcn/infer/infer.hpp"
#include "hcn/learn/online.hpp"

namespace hcn::cli {

namespace {

using json = nlohmann::json;
using data::ConfigError;
using model::BinaryTensor3;

struct Flags {
  std::string config, preset, out, data, model;
  std::optional<std::uint64_t> seed;
  bool online = false;
  std::optional<int> epochs;
  std::optional<double> damping, lambda;
  std::optional<std::size_t> mask_block, label, limit;
};

template <typename T>
void read(const json& j, const char* key, T& out) {
  auto it = j.find(key);
  if (it == j.end()) return;
  try {
    out = it->template get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
  }
}

json load_config_file(const std::string& path) {
  json j;
  try {
    j = json::parse(data::read_file(path));
  } catch (const json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
  if (!j.is_object()) throw ConfigError(path + ": config must be an object");
  static const std::vector<std::string> known{"command", "preset",      "seed",       "out",     "data",
                                              "model",   "architecture", "hyperparams", "online",  "supervised",
                                              "n_train", "n_test",      "limit",      "mask_block", "label",
                                              "fit_epochs"};
  for (const auto& [key, value] : j.items())
    if (std::find(known.begin(), known.end(), key) == known.end()) throw ConfigError("unknown config key '" + key + "'");
  return j;
}

bool needs_architecture(const std::string& command) { return command == "generate" || command == "train"; }

RunConfig resolve(const std::string& command, const Flags& f) {
  const json file = f.config.empty() ? json::object() : load_config_file(f.config);
  RunConfig c;
  c.command = command;
  read(file, "preset", c.preset);
  if (!f.preset.empty()) c.preset = f.preset;
  if (!c.preset.empty()) {
    const data::Preset p = data::preset(c.preset);
    c.arch = p.arch;
    c.hyper = p.hyper;
    c.online = p.online;
    c.supervised = p.supervised;
    c.n_train = p.n_train;
    c.n_test = p.n_test;
  }
  read(file, "seed", c.seed);
  c.hyper.seed = c.seed;
  if (auto it = file.find("architecture"); it != file.end()) model::from_json(*it, c.arch);
  if (auto it = file.find("hyperparams"); it != file.end()) model::from_json(*it, c.hyper);
  std::string path;
  if (path.clear(), read(file, "out", path), !path.empty()) c.out = path;
  if (path.clear(), read(file, "data", path), !path.empty()) c.data = path;
  if (path.clear(), read(file, "model", path), !path.empty()) c.model = path;
  read(file, "online", c.online);
  read(file, "supervised", c.supervised);
  read(file, "n_train", c.n_train);
  read(file, "n_test", c.n_test);
  read(file, "limit", c.limit);
  read(file, "mask_block", c.mask_block);
  read(file, "fit_epochs", c.fit_epochs);
  if (auto it = file.find("label"); it != file.end() && !it->is_null()) {
    std::size_t k = 0;
    read(file, "label", k);
    c.label = k;
  }

  if (f.seed) c.seed = c.hyper.seed = *f.seed;
  if (!f.out.empty()) c.out = f.out;
  if (!f.data.empty()) c.data = f.data;
  if (!f.model.empty()) c.model = f.model;
  if (f.online) c.online = true;
  if (f.epochs) c.hyper.epochs = *f.epochs;
  if (f.damping) c.hyper.alpha = *f.damping;
  if (f.lambda) c.hyper.lambda = *f.lambda;
  if (f.mask_block) c.mask_block = *f.mask_block;
  if (f.label) c.label = *f.label;
  if (f.limit) c.limit = *f.limit;

  if (needs_architecture(command)) {
    if (c.preset.empty() && file.find("architecture") == file.end())
      throw ConfigError("no preset and no architecture given");
    c.arch.validate();
    c.hyper.validate(c.arch);
  } else if (c.model.empty()) {
    throw ConfigError(command + " needs --model");
  }
  if (c.fit_epochs < 0) throw ConfigError("fit_epochs must be non-negative");
  return c;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json compression_json(const data::Compression& c) {
  return json{{"percent", finite_or_null(c.percent)},
              {"image_bits", c.image_bits},
              {"sparsification_bits", c.sparsification_bits},
              {"weight_bits", c.weight_bits},
              {"error_bits", c.error_bits},
              {"used_features", c.used_features}};
}

void write_json(const fs::path& path, const json& j) { data::write_file(path, j.dump(2) + "\n"); }

data::Dataset load_input(const RunConfig& c, bool training) {
  data::Dataset d;
  if (!c.data.empty()) {
    d = data::load_dataset(c.data);
  } else if (!c.preset.empty()) {
    data::Preset p = data::preset(c.preset);
    p.n_train = c.n_train;
    p.n_test = c.n_test;
    auto split = data::generate_preset(p, c.seed);
    d = training || split.test.size() == 0 ? std::move(split.train) : std::move(split.test);
  } else {
    throw ConfigError("no --data and no preset to generate it from");
  }
  if (c.limit > 0) d = d.head(c.limit);
  if (d.size() == 0) throw ConfigError("the dataset is empty");
  return d;
}

// Smallest number of images whose predicted template disagrees with the
// planted one under a one-to-one relabelling of the predictions.
std::size_t clustering_errors(const std::vector<std::size_t>& predicted, const std::vector<std::size_t>& truth,
                              std::size_t templates) {
  std::vector<std::vector<std::size_t>> hits(templates, std::vector<std::size_t>(templates, 0));
  for (std::size_t i = 0; i < predicted.size(); ++i)
    if (predicted[i] < templates && truth[i] < templates) ++hits[predicted[i]][truth[i]];
  std::size_t best = 0;
  if (templates <= 8) {
    std::vector<std::size_t> perm(templates);
    std::iota(perm.begin(), perm.end(), 0);
    do {
      std::size_t agree = 0;
      for (std::size_t t = 0; t < templates; ++t) agree += hits[t][perm[t]];
      best = std::max(best, agree);
    } while (std::next_permutation(perm.begin(), perm.end()));
  } else {
    for (std::size_t t = 0; t < templates; ++t) best += *std::max_element(hits[t].begin(), hits[t].end());
  }
  return predicted.size() - best;
}

json classification_metrics(const data::Dataset& d, const std::vector<infer::ClassScores>& scores,
                            const model::Architecture& arch) {
  json m{{"images", d.size()}};
  if (d.labeled()) {
    std::vector<std::vector<std::size_t>> confusion(arch.num_classes, std::vector<std::size_t>(arch.num_classes, 0));
    std::size_t errors = 0;
    for (std::size_t i = 0; i < d.size(); ++i) {
      if (d.labels[i] >= arch.num_classes) throw model::ShapeError("label out of the model's class range");
      ++confusion[d.labels[i]][scores[i].label];
      errors += scores[i].label != d.labels[i];
    }
    m["errors"] = errors;
    m["error_rate"] = static_cast<double>(errors) / static_cast<double>(d.size());
    m["confusion"] = confusion;
  }
  if (d.planted_top.size() == d.size()) {
    const auto truth = data::planted_templates(d);
    std::vector<std::size_t> predicted;
    for (const auto& s : scores) predicted.push_back(s.template_id);
    const std::size_t errors = clustering_errors(predicted, truth, arch.num_templates());
    m["clustering_errors"] = errors;
    m["clustering_error_rate"] = static_cast<double>(errors) / static_cast<double>(d.size());
  }
  return m;
}

int cmd_generate(const RunConfig& c, std::ostream& out) {
  data::Split split;
  if (!c.preset.empty()) {
    data::Preset p = data::preset(c.preset);
    p.arch = c.arch;
    p.hyper = c.hyper;
    p.n_train = c.n_train;
    p.n_test = c.n_test;
    split = data::generate_preset(p, c.seed);
  } else {
    Rng streams(c.seed);
    split.train = data::sample_hcn(c.arch, c.hyper, c.n_train, streams.next());
    split.test = data::sample_hcn(c.arch, c.hyper, c.n_test, streams.next());
    split.train.seed = split.test.seed = c.seed;
  }
  data::save_dataset(c.out / "train", split.train);
  if (split.test.size() > 0) data::save_dataset(c.out / "test", split.test);
  write_json(c.out / "metrics.json", json{{"command", "generate"},
                                          {"train_images", split.train.size()},
                                          {"test_images", split.test.size()},
                                          {"labeled", split.train.labeled()}});
  out << "generated " << split.train.size() << " training and " << split.test.size() << " test images in "
      << c.out.string() << "\n";
  return kExitOk;
}

void write_feature_grids(const fs::path& dir, const learn::TrainedModel& m) {
  for (std::size_t l = 1; l < m.weights.size(); ++l) {
    const auto tiles = infer::feature_renderings(m.weights, l);
    data::write_pbm(dir / ("features_layer" + std::to_string(l) + ".pbm"), data::tile_grid(tiles));
  }
}

int cmd_train(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const data::Dataset d = load_input(c, true);
  const learn::Labels labels = c.supervised && d.labeled() ? d.label_slots() : learn::Labels{};
  const bool single = c.arch.num_layers() == 1 && !c.arch.has_class_layer();

  const auto t0 = std::chrono::steady_clock::now();
  learn::TrainedModel m;
  learn::LearnReport report;
  std::optional<data::Compression> comp;
  if (c.online) {
    auto r = learn::learn_online(d.images, labels, c.arch, c.hyper);
    m = std::move(r.model);
    report = std::move(r.report);
    report.converged = !report.deltas.empty() && report.deltas.back() < c.hyper.tolerance;
    if (single) comp = infer::model_compression(d.images, infer::fit_sparsification(d.images, m, c.fit_epochs), m.weights[1]);
  } else {
    auto r = learn::learn_batch(d.images, labels, c.arch, c.hyper);
    if (single) comp = infer::model_compression(d.images, r.state, r.model.weights[1]);
    m = std::move(r.model);
    report = std::move(r.report);
  }
  const double wall = seconds_since(t0);

  data::save_model(c.out / "model", m);
  write_feature_grids(c.out, m);

  std::vector<std::size_t> weights_on;
  for (std::size_t l = 1; l < m.weights.size(); ++l) weights_on.push_back(m.weights[l].count());
  json metrics{{"command", "train"},
               {"mode", c.online ? "online" : "batch"},
               {"images", d.size()},
               {"supervised", !labels.empty()},
               {"epochs_run", report.epochs_run},
               {"converged", report.converged},
               {"final_delta", report.deltas.empty() ? json(nullptr) : finite_or_null(report.deltas.back())},
               {"deltas", json::array()},
               {"wall_seconds", wall},
               {"weights_on", weights_on},
               {"compression", comp ? compression_json(*comp) : json(nullptr)}};
  for (double delta : report.deltas) metrics["deltas"].push_back(finite_or_null(delta));
  write_json(c.out / "metrics.json", metrics);

  if (!report.converged && report.epochs_run > 0)
    err << "warning: no fixed point after " << report.epochs_run << " epochs (last change "
        << report.deltas.back() << ")\n";
  out << "trained on " << d.size() << " images in " << wall << " s";
  if (comp) out << ", compression " << comp->percent << "%";
  out << "\n";
  return kExitOk;
}

int cmd_classify(const RunConfig& c, std::ostream& out) {
  const auto m = data::load_model(c.model);
  const data::Dataset d = load_input(c, false);
  const auto scores = infer::classify_batch(d.images, m);

  json per_image = json::array();
  for (const auto& s : scores) {
    json row{{"label", s.label}, {"template", s.template_id}, {"classes", json::array()}, {"templates", json::array()}};
    for (double v : s.classes) row["classes"].push_back(finite_or_null(v));
    for (double v : s.templates) row["templates"].push_back(finite_or_null(v));
    per_image.push_back(std::move(row));
  }
  write_json(c.out / "scores.json", per_image);
  json metrics = classification_metrics(d, scores, m.arch);
  metrics["command"] = "classify";
  write_json(c.out / "metrics.json", metrics);
  out << "classified " << d.size() << " images";
  if (metrics.contains("error_rate")) out << ", error " << 100.0 * metrics["error_rate"].get<double>() << "%";
  if (metrics.contains("clustering_error_rate"))
    out << ", clustering error " << 100.0 * metrics["clustering_error_rate"].get<double>() << "%";
  out << "\n";
  return kExitOk;
}

int cmd_inpaint(const RunConfig& c, std::ostream& out) {
  const auto m = data::load_model(c.model);
  const data::Dataset d = load_input(c, false);
  const bool have_clean = d.clean.size() == d.size();
  const std::size_t h = d.images.front().rows(), w = d.images.front().cols();
  if (c.mask_block > h || c.mask_block > w) throw ConfigError("mask block larger than the images");
  if (c.label && *c.label >= m.arch.num_classes) throw ConfigError("label out of the model's class range");

  Rng rng(c.seed);
  data::Dataset completed, masks;
  completed.name = d.name + "-inpainted";
  masks.name = d.name + "-masks";
  completed.labels = d.labels;
  completed.seed = masks.seed = c.seed;
  std::size_t masked = 0, correct = 0, observed = 0, unchanged = 0;
  for (std::size_t n = 0; n < d.size(); ++n) {
    const BinaryTensor3& x = d.images[n];
    BinaryTensor3 mask(x.features(), x.rows(), x.cols());
    for (std::size_t i = 0; i < mask.size(); ++i) mask.set(i, true);
    if (c.mask_block > 0) {
      const std::size_t r0 = rng.below(h - c.mask_block + 1), c0 = rng.below(w - c.mask_block + 1);
      for (std::size_t f = 0; f < x.features(); ++f)
        for (std::size_t r = r0; r < r0 + c.mask_block; ++r)
          for (std::size_t k = c0; k < c0 + c.mask_block; ++k) mask.set(f, r, k, false);
    }
    const BinaryTensor3 y = infer::inpaint(x, mask, m, c.label);
    const BinaryTensor3& truth = have_clean ? d.clean[n] : x;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (mask.at(i)) {
        ++observed;
        unchanged += y.at(i) == x.at(i);
      } else {
        ++masked;
        correct += y.at(i) == truth.at(i);
      }
    }
    completed.images.push_back(y);
    masks.images.push_back(std::move(mask));
  }
  data::save_dataset(c.out / "inpainted", completed);
  data::save_dataset(c.out / "masks", masks);
  const double accuracy = masked == 0 ? 1.0 : static_cast<double>(correct) / static_cast<double>(masked);
  write_json(c.out / "metrics.json",
             json{{"command", "inpaint"},
                  {"images", d.size()},
                  {"ground_truth", have_clean ? "clean" : "observed"},
                  {"masked_pixels", masked},
                  {"masked_pixel_accuracy", accuracy},
                  {"observed_pixels", observed},
                  {"observed_unchanged", unchanged == observed}});
  out << "inpainted " << d.size() << " images, masked-pixel accuracy " << 100.0 * accuracy << "%\n";
  return kExitOk;
}

int cmd_eval(const RunConfig& c, std::ostream& out) {
  const auto m = data::load_model(c.model);
  const data::Dataset d = load_input(c, false);
  json metrics{{"command", "eval"}, {"images", d.size()}};
  if (m.arch.num_layers() == 1 && !m.arch.has_class_layer()) {
    const auto st = infer::fit_sparsification(d.images, m, c.fit_epochs);
    const auto comp = infer::model_compression(d.images, st, m.weights[1]);
    metrics["compression"] = compression_json(comp);
    out << "compression " << comp.percent << "%\n";
  }
  if (m.arch.has_class_layer()) {
    const auto scores = infer::classify_batch(d.images, m);
    metrics["classification"] = classification_metrics(d, scores, m.arch);
    if (metrics["classification"].contains("error_rate"))
      out << "classification error " << 100.0 * metrics["classification"]["error_rate"].get<double>() << "%\n";
  }
  write_json(c.out / "metrics.json", metrics);
  return kExitOk;
}

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config, "JSON run configuration");
  sub->add_option("--preset", f.preset, "named experiment");
  sub->add_option("--seed", f.seed, "seed for data generation and learning");
  sub->add_option("--out", f.out, "output directory");
  sub->add_option("--data", f.data, "dataset directory");
  sub->add_option("--model", f.model, "trained model directory");
  sub->add_flag("--online", f.online, "learn online in minibatches");
  sub->add_option("--epochs", f.epochs, "epoch limit");
  sub->add_option("--damping", f.damping, "damping of the pooling messages, in (0, 1]");
  sub->add_option("--lambda", f.lambda, "online forgetting factor");
  sub->add_option("--mask-block", f.mask_block, "inpaint: side of the hidden square");
  sub->add_option("--label", f.label, "inpaint: clamp this class");
  sub->add_option("--limit", f.limit, "use only the first N images");
}

}  // namespace

json to_json(const RunConfig& c) {
  return json{{"command", c.command},
              {"preset", c.preset},
              {"seed", c.seed},
              {"out", c.out.string()},
              {"data", c.data.string()},
              {"model", c.model.string()},
              {"architecture", c.arch},
              {"hyperparams", c.hyper},
              {"online", c.online},
              {"supervised", c.supervised},
              {"n_train", c.n_train},
              {"n_test", c.n_test},
              {"limit", c.limit},
              {"mask_block", c.mask_block},
              {"label", c.label ? json(*c.label) : json(nullptr)},
              {"fit_epochs", c.fit_epochs}};
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hierarchical compositional network experiments", "hcn"};
  app.require_subcommand(1, 1);
  Flags f;
  const std::vector<std::pair<std::string, std::string>> commands{
      {"generate", "write a dataset"},
      {"train", "learn a model"},
      {"classify", "classify images with a trained model"},
      {"inpaint", "fill hidden blocks of images"},
      {"eval", "compression and error tables of a trained model"}};
  for (const auto& [name, help] : commands) add_common(app.add_subcommand(name, help), f);

  try {
    std::vector<std::string> rest(args.size() > 1 ? args.begin() + 1 : args.end(), args.end());
    std::reverse(rest.begin(), rest.end());
    app.parse(rest);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitConfig;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    const RunConfig c = resolve(command, f);
    fs::create_directories(c.out);
    write_json(c.out / "config.json", to_json(c));
    if (command == "generate") return cmd_generate(c, out);
    if (command == "train") return cmd_train(c, out, err);
    if (command == "classify") return cmd_classify(c, out);
    if (command == "inpaint") return cmd_inpaint(c, out);
    return cmd_eval(c, out);
  } catch (const data::IoError& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}

}  // namespace hcn::cli
