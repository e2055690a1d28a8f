#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hcn/data/dataset.hpp"
#include "hcn/learn/learner.hpp"
#include "hcn/model/tensor.hpp"

namespace hcn::data {

namespace fs = std::filesystem;

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class PbmEncoding { Plain, Raw };  // P1 text, P4 packed

/// One channel of `image` as a portable bitmap (1 = black).
std::string format_pbm(const BinaryTensor3& image, PbmEncoding enc = PbmEncoding::Raw, std::size_t channel = 0);
/// Parses P1 or P4 into a 1 x H x W tensor.
BinaryTensor3 parse_pbm(const std::string& bytes);

void write_pbm(const fs::path& path, const BinaryTensor3& image, PbmEncoding enc = PbmEncoding::Raw,
               std::size_t channel = 0);
BinaryTensor3 read_pbm(const fs::path& path);

/// Multi-channel tensor as a directory: channel_<f>.pbm plus tensor.json.
void save_tensor(const fs::path& dir, const BinaryTensor3& t);
BinaryTensor3 load_tensor(const fs::path& dir);

/// "HCNW1", u32 LE A F H W, then the bits in row-major order packed MSB first.
std::string encode_weights(const BinaryTensor4& w);
BinaryTensor4 decode_weights(const std::string& bytes);
void save_weights(const fs::path& path, const BinaryTensor4& w);
BinaryTensor4 load_weights(const fs::path& path);

/// model.json (architecture and hyperparameters) plus layer_<l>.hcnw.
void save_model(const fs::path& dir, const learn::TrainedModel& model);
learn::TrainedModel load_model(const fs::path& dir);

/// manifest.json listing image files, labels and seed; single-channel images are
/// bitmaps, deeper ones tensor directories. Clean images, planted weights and
/// planted top sparsifications are written when present.
void save_dataset(const fs::path& dir, const Dataset& d);
Dataset load_dataset(const fs::path& dir);

/// Tiles the channel-0 planes of `tiles` (all the same size) into a grid with
/// one blank pixel between them, at most `per_row` per row.
BinaryTensor3 tile_grid(std::span<const BinaryTensor3> tiles, std::size_t per_row = 8);

/// MNIST idx3 images (pixels >= threshold become 1) and idx1 labels; `limit` 0 reads all.
std::vector<BinaryTensor3> load_idx_images(const fs::path& path, std::size_t limit = 0, int threshold = 128);
std::vector<std::size_t> load_idx_labels(const fs::path& path, std::size_t limit = 0);

std::string read_file(const fs::path& path);
void write_file(const fs::path& path, const std::string& bytes);

}  // namespace hcn::data
