#pragma once

#include <nlohmann/json.hpp>
#include <stdexcept>
#include <string>

#include "hcn/model/architecture.hpp"

namespace hcn::model {

// Unknown keys and wrong types raise ConfigError; missing keys keep their defaults.
void to_json(nlohmann::json& j, const LayerSpec& l);
void from_json(const nlohmann::json& j, LayerSpec& l);
void to_json(nlohmann::json& j, const Architecture& a);
void from_json(const nlohmann::json& j, Architecture& a);
void to_json(nlohmann::json& j, const Hyperparams& h);
void from_json(const nlohmann::json& j, Hyperparams& h);

}  // namespace hcn::model

namespace hcn::data {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

std::string schedule_name(model::Schedule s);
model::Schedule parse_schedule(const std::string& name);

}  // namespace hcn::data
