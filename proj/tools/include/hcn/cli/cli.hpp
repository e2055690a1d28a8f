#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "hcn/model/architecture.hpp"

namespace hcn::cli {

namespace fs = std::filesystem;

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitConfig = 2;

/// Everything a command needs; written back out as config.json next to the results.
struct RunConfig {
  std::string command;
  std::string preset;
  std::uint64_t seed = 0;
  fs::path out = "hcn_out";
  fs::path data;   // dataset directory; empty: generate from the preset
  fs::path model;  // trained model directory (classify, inpaint, eval)
  model::Architecture arch;
  model::Hyperparams hyper;
  bool online = false;
  bool supervised = false;
  std::size_t n_train = 1;
  std::size_t n_test = 0;
  std::size_t limit = 0;       // use only the first `limit` images; 0 keeps all
  std::size_t mask_block = 6;  // inpaint: side of the square hidden block, 0 hides nothing
  std::optional<std::size_t> label;
  int fit_epochs = 20;  // sparsification epochs for scoring models that keep no state
};

nlohmann::json to_json(const RunConfig& c);

/// Runs one command line (argv[0] is the program name). Returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hcn::cli
