#include "hcn/data/config.hpp"

#include <array>
#include <initializer_list>
#include <string_view>

namespace hcn::data {

std::string schedule_name(model::Schedule s) {
  return s == model::Schedule::SingleVisit ? "single_visit" : "alternating";
}

model::Schedule parse_schedule(const std::string& name) {
  if (name == "alternating") return model::Schedule::Alternating;
  if (name == "single_visit") return model::Schedule::SingleVisit;
  throw ConfigError("unknown schedule '" + name + "'");
}

}  // namespace hcn::data

namespace hcn::model {

namespace {

using nlohmann::json;
using data::ConfigError;

void check_keys(const json& j, std::string_view what, std::initializer_list<std::string_view> allowed) {
  if (!j.is_object()) throw ConfigError(std::string(what) + " must be an object");
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (auto a : allowed) known = known || key == a;
    if (!known) throw ConfigError("unknown key '" + key + "' in " + std::string(what));
  }
}

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

}  // namespace

void to_json(json& j, const LayerSpec& l) {
  j = json{{"features", l.num_features}, {"feat_h", l.feat_h}, {"feat_w", l.feat_w},
           {"pool_h", l.pool_h},         {"pool_w", l.pool_w}};
}

void from_json(const json& j, LayerSpec& l) {
  check_keys(j, "layer", {"features", "feat_h", "feat_w", "pool_h", "pool_w"});
  read(j, "features", l.num_features);
  read(j, "feat_h", l.feat_h);
  read(j, "feat_w", l.feat_w);
  read(j, "pool_h", l.pool_h);
  read(j, "pool_w", l.pool_w);
}

void to_json(json& j, const Architecture& a) {
  j = json{{"image", {a.image.features, a.image.rows, a.image.cols}},
           {"layers", a.layers},
           {"num_classes", a.num_classes},
           {"templates_per_class", a.templates_per_class}};
}

void from_json(const json& j, Architecture& a) {
  check_keys(j, "architecture", {"image", "layers", "num_classes", "templates_per_class"});
  if (auto it = j.find("image"); it != j.end()) {
    if (!it->is_array() || it->size() != 3) throw ConfigError("image must be [channels, rows, cols]");
    std::array<std::size_t, 3> d{};
    read(j, "image", d);
    a.image = Dims3{d[0], d[1], d[2]};
  }
  read(j, "layers", a.layers);
  read(j, "num_classes", a.num_classes);
  read(j, "templates_per_class", a.templates_per_class);
}

void to_json(json& j, const Hyperparams& h) {
  j = json{{"p01", h.p01},
           {"p10", h.p10},
           {"ps", h.ps},
           {"pw", h.pw},
           {"alpha", h.alpha},
           {"lambda", h.lambda},
           {"epochs", h.epochs},
           {"seed", h.seed},
           {"pool_perturbation", h.pool_perturbation},
           {"perturbation", h.perturbation},
           {"tolerance", h.tolerance},
           {"schedule", data::schedule_name(h.schedule)},
           {"minibatch", h.minibatch}};
}

void from_json(const json& j, Hyperparams& h) {
  check_keys(j, "hyperparams",
             {"p01", "p10", "ps", "pw", "alpha", "lambda", "epochs", "seed", "pool_perturbation", "perturbation", "tolerance",
              "schedule", "minibatch"});
  read(j, "p01", h.p01);
  read(j, "p10", h.p10);
  read(j, "ps", h.ps);
  read(j, "pw", h.pw);
  read(j, "alpha", h.alpha);
  read(j, "lambda", h.lambda);
  read(j, "epochs", h.epochs);
  read(j, "seed", h.seed);
  read(j, "pool_perturbation", h.pool_perturbation);
  read(j, "perturbation", h.perturbation);
  read(j, "tolerance", h.tolerance);
  read(j, "minibatch", h.minibatch);
  if (auto it = j.find("schedule"); it != j.end()) {
    if (!it->is_string()) throw ConfigError("schedule must be a string");
    h.schedule = data::parse_schedule(it->get<std::string>());
  }
}

}  // namespace hcn::model
