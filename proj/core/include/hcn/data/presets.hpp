#pragma once

#include <cstdint>
#include <span>
#include <string>

#include "hcn/data/dataset.hpp"
#include "hcn/model/architecture.hpp"

namespace hcn::data {

/// Desk-scale settings of one experiment.
struct Preset {
  std::string name;
  model::Architecture arch;
  model::Hyperparams hyper;
  bool online = false;
  bool supervised = false;  // train with the labels when the data has them
  std::size_t n_train = 1;
  std::size_t n_test = 0;
};

std::span<const std::string> preset_names();

/// Throws ConfigError for an unknown name.
Preset preset(const std::string& name);

struct Split {
  Dataset train;
  Dataset test;  // empty for the single-layer experiments
};

Split generate_preset(const Preset& p, std::uint64_t seed);

}  // namespace hcn::data
