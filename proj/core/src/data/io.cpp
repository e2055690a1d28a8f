#include "hcn/data/io.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <limits>
#include <nlohmann/json.hpp>

#include "hcn/data/config.hpp"

namespace hcn::data {

using nlohmann::json;

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return std::string(std::istreambuf_iterator<char>(in), {});
}

void write_file(const fs::path& path, const std::string& bytes) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed for " + path.string());
}

// ---- portable bitmaps ----

std::string format_pbm(const BinaryTensor3& image, PbmEncoding enc, std::size_t channel) {
  if (channel >= image.features()) throw model::ShapeError("bitmap channel out of range");
  const std::size_t h = image.rows(), w = image.cols();
  std::string out = (enc == PbmEncoding::Plain ? "P1\n" : "P4\n") + std::to_string(w) + " " + std::to_string(h) + "\n";
  if (enc == PbmEncoding::Plain) {
    for (std::size_t r = 0; r < h; ++r) {
      for (std::size_t c = 0; c < w; ++c) {
        if (c) out += ' ';
        out += image(channel, r, c) ? '1' : '0';
      }
      out += '\n';
    }
    return out;
  }
  const std::size_t row_bytes = (w + 7) / 8;
  for (std::size_t r = 0; r < h; ++r) {
    for (std::size_t b = 0; b < row_bytes; ++b) {
      unsigned char byte = 0;
      for (std::size_t k = 0; k < 8; ++k) {
        const std::size_t c = b * 8 + k;
        if (c < w && image(channel, r, c)) byte |= static_cast<unsigned char>(0x80U >> k);
      }
      out += static_cast<char>(byte);
    }
  }
  return out;
}

namespace {

struct Cursor {
  const std::string& s;
  std::size_t pos = 0;

  void skip_space() {
    while (pos < s.size()) {
      if (s[pos] == '#') {
        while (pos < s.size() && s[pos] != '\n') ++pos;
      } else if (std::isspace(static_cast<unsigned char>(s[pos]))) {
        ++pos;
      } else {
        break;
      }
    }
  }

  std::size_t number() {
    skip_space();
    if (pos >= s.size() || !std::isdigit(static_cast<unsigned char>(s[pos]))) throw IoError("malformed bitmap header");
    std::size_t v = 0;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
      if (v > (std::numeric_limits<std::uint32_t>::max() - 9) / 10) throw IoError("bitmap dimension overflow");
      v = v * 10 + static_cast<std::size_t>(s[pos++] - '0');
    }
    return v;
  }
};

}  // namespace

BinaryTensor3 parse_pbm(const std::string& bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '1' && bytes[1] != '4'))
    throw IoError("not a P1/P4 bitmap");
  const bool plain = bytes[1] == '1';
  Cursor cur{bytes, 2};
  const std::size_t w = cur.number();
  const std::size_t h = cur.number();
  if (w == 0 || h == 0) throw IoError("bitmap has zero size");
  if (w * h > (std::size_t{1} << 32)) throw IoError("bitmap dimension overflow");
  BinaryTensor3 img(1, h, w);
  if (plain) {
    for (std::size_t i = 0; i < w * h; ++i) {
      cur.skip_space();
      if (cur.pos >= bytes.size()) throw IoError("truncated bitmap");
      const char ch = bytes[cur.pos++];
      if (ch != '0' && ch != '1') throw IoError("bad bitmap pixel");
      img.set(i, ch == '1');
    }
    return img;
  }
  if (cur.pos >= bytes.size() || !std::isspace(static_cast<unsigned char>(bytes[cur.pos])))
    throw IoError("malformed bitmap header");
  ++cur.pos;
  const std::size_t row_bytes = (w + 7) / 8;
  if (bytes.size() - cur.pos < row_bytes * h) throw IoError("truncated bitmap");
  for (std::size_t r = 0; r < h; ++r)
    for (std::size_t c = 0; c < w; ++c) {
      const auto byte = static_cast<unsigned char>(bytes[cur.pos + r * row_bytes + c / 8]);
      img.set(0, r, c, (byte >> (7 - c % 8)) & 1U);
    }
  return img;
}

void write_pbm(const fs::path& path, const BinaryTensor3& image, PbmEncoding enc, std::size_t channel) {
  write_file(path, format_pbm(image, enc, channel));
}

BinaryTensor3 read_pbm(const fs::path& path) {
  try {
    return parse_pbm(read_file(path));
  } catch (const IoError& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

// ---- tensor directories ----

void save_tensor(const fs::path& dir, const BinaryTensor3& t) {
  fs::create_directories(dir);
  json files = json::array();
  for (std::size_t f = 0; f < t.features(); ++f) {
    const std::string name = "channel_" + std::to_string(f) + ".pbm";
    write_pbm(dir / name, t, PbmEncoding::Raw, f);
    files.push_back(name);
  }
  const json manifest{{"shape", {t.features(), t.rows(), t.cols()}}, {"channels", files}};
  write_file(dir / "tensor.json", manifest.dump(2) + "\n");
}

BinaryTensor3 load_tensor(const fs::path& dir) {
  json manifest;
  try {
    manifest = json::parse(read_file(dir / "tensor.json"));
    const auto shape = manifest.at("shape").get<std::array<std::size_t, 3>>();
    const auto files = manifest.at("channels").get<std::vector<std::string>>();
    if (files.size() != shape[0]) throw IoError("tensor manifest lists wrong number of channels");
    BinaryTensor3 t(shape[0], shape[1], shape[2]);
    for (std::size_t f = 0; f < shape[0]; ++f) {
      const BinaryTensor3 plane = read_pbm(dir / files[f]);
      if (plane.rows() != shape[1] || plane.cols() != shape[2]) throw IoError("channel size disagrees with manifest");
      for (std::size_t r = 0; r < shape[1]; ++r)
        for (std::size_t c = 0; c < shape[2]; ++c) t.set(f, r, c, plane(0, r, c));
    }
    return t;
  } catch (const json::exception& e) {
    throw IoError(dir.string() + ": bad tensor manifest: " + e.what());
  }
}

// ---- weights ----

namespace {

constexpr char kMagic[] = "HCNW1";
constexpr std::size_t kMagicLen = 5;
constexpr std::size_t kHeaderLen = kMagicLen + 16;

void put_u32(std::string& out, std::uint32_t v) {
  for (int k = 0; k < 4; ++k) out += static_cast<char>((v >> (8 * k)) & 0xFFU);
}

std::uint32_t get_u32(const std::string& s, std::size_t at) {
  std::uint32_t v = 0;
  for (int k = 0; k < 4; ++k) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(s[at + k])) << (8 * k);
  return v;
}

std::uint32_t narrow_dim(std::size_t d) {
  if (d > std::numeric_limits<std::uint32_t>::max()) throw IoError("weight dimension does not fit u32");
  return static_cast<std::uint32_t>(d);
}

}  // namespace

std::string encode_weights(const BinaryTensor4& w) {
  std::string out(kMagic, kMagicLen);
  put_u32(out, narrow_dim(w.channels()));
  put_u32(out, narrow_dim(w.features()));
  put_u32(out, narrow_dim(w.rows()));
  put_u32(out, narrow_dim(w.cols()));
  std::string payload((w.size() + 7) / 8, '\0');
  for (std::size_t i = 0; i < w.size(); ++i)
    if (w.at(i)) payload[i / 8] = static_cast<char>(static_cast<unsigned char>(payload[i / 8]) | (0x80U >> (i % 8)));
  return out + payload;
}

BinaryTensor4 decode_weights(const std::string& bytes) {
  if (bytes.size() < kHeaderLen || bytes.compare(0, kMagicLen, kMagic) != 0) throw IoError("malformed weight header");
  std::uint64_t n = 1;
  std::array<std::uint32_t, 4> d{};
  for (int k = 0; k < 4; ++k) {
    d[k] = get_u32(bytes, kMagicLen + 4 * k);
    if (d[k] != 0 && n > (std::uint64_t{1} << 40) / d[k]) throw IoError("weight dimensions overflow");
    n *= d[k];
  }
  const std::uint64_t payload = (n + 7) / 8;
  if (bytes.size() - kHeaderLen < payload) throw IoError("truncated weight payload");
  if (bytes.size() - kHeaderLen > payload) throw IoError("trailing bytes after weight payload");
  BinaryTensor4 w(d[0], d[1], d[2], d[3]);
  for (std::size_t i = 0; i < w.size(); ++i)
    w.set(i, (static_cast<unsigned char>(bytes[kHeaderLen + i / 8]) >> (7 - i % 8)) & 1U);
  return w;
}

void save_weights(const fs::path& path, const BinaryTensor4& w) { write_file(path, encode_weights(w)); }

BinaryTensor4 load_weights(const fs::path& path) {
  try {
    return decode_weights(read_file(path));
  } catch (const IoError& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

// ---- models ----

void save_model(const fs::path& dir, const learn::TrainedModel& model) {
  fs::create_directories(dir);
  json layers = json::array();
  for (std::size_t l = 1; l < model.weights.size(); ++l) {
    const std::string name = "layer_" + std::to_string(l) + ".hcnw";
    save_weights(dir / name, model.weights[l]);
    layers.push_back(name);
  }
  const json j{{"format", "hcn-model"},
               {"version", 1},
               {"architecture", model.arch},
               {"hyperparams", model.hyper},
               {"layers", layers}};
  write_file(dir / "model.json", j.dump(2) + "\n");
}

learn::TrainedModel load_model(const fs::path& dir) {
  learn::TrainedModel m;
  std::vector<std::string> layers;
  try {
    const json j = json::parse(read_file(dir / "model.json"));
    if (j.at("format") != "hcn-model") throw IoError("not a model manifest");
    m.arch = j.at("architecture").get<model::Architecture>();
    m.hyper = j.at("hyperparams").get<model::Hyperparams>();
    layers = j.at("layers").get<std::vector<std::string>>();
  } catch (const json::exception& e) {
    throw IoError(dir.string() + ": bad model manifest: " + e.what());
  }
  m.arch.validate();
  const auto shapes = model::layer_shapes(m.arch);
  if (layers.size() != m.arch.num_layers()) throw IoError("model lists wrong number of layers");
  m.weights.resize(layers.size() + 1);
  for (std::size_t l = 1; l <= layers.size(); ++l) {
    m.weights[l] = load_weights(dir / layers[l - 1]);
    const auto& s = shapes[l];
    const auto& w = m.weights[l];
    if (w.channels() != s.below.features || w.features() != s.sparse.features || w.rows() != s.feat_h ||
        w.cols() != s.feat_w)
      throw IoError("layer " + std::to_string(l) + " weights disagree with the architecture");
  }
  return m;
}

// ---- datasets ----

namespace {

std::string numbered(std::size_t i) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%05zu", i);
  return buf;
}

json save_images(const fs::path& root, const std::string& sub, const std::vector<BinaryTensor3>& images) {
  json paths = json::array();
  for (std::size_t i = 0; i < images.size(); ++i) {
    std::string rel = sub + "/" + numbered(i);
    if (images[i].features() == 1) {
      rel += ".pbm";
      write_pbm(root / rel, images[i]);
    } else {
      save_tensor(root / rel, images[i]);
    }
    paths.push_back(rel);
  }
  return paths;
}

std::vector<BinaryTensor3> load_images(const fs::path& root, const json& paths) {
  std::vector<BinaryTensor3> out;
  for (const auto& p : paths) {
    const fs::path path = root / p.get<std::string>();
    out.push_back(path.extension() == ".pbm" ? read_pbm(path) : load_tensor(path));
  }
  return out;
}

}  // namespace

void save_dataset(const fs::path& dir, const Dataset& d) {
  d.validate();
  fs::create_directories(dir);
  json j{{"format", "hcn-dataset"}, {"version", 1}, {"name", d.name}, {"seed", d.seed}};
  if (!d.images.empty()) {
    const auto& x = d.images.front();
    j["shape"] = {x.features(), x.rows(), x.cols()};
  }
  j["images"] = save_images(dir, "images", d.images);
  if (d.labeled()) j["labels"] = d.labels;
  if (!d.clean.empty()) j["clean"] = save_images(dir, "clean", d.clean);
  if (!d.planted_top.empty()) j["planted_top"] = save_images(dir, "planted_top", d.planted_top);
  if (!d.planted.empty()) {
    json layers = json::array();
    for (std::size_t l = 1; l < d.planted.size(); ++l) {
      const std::string rel = "planted/layer_" + std::to_string(l) + ".hcnw";
      save_weights(dir / rel, d.planted[l]);
      layers.push_back(rel);
    }
    j["planted"] = layers;
  }
  write_file(dir / "manifest.json", j.dump(2) + "\n");
}

Dataset load_dataset(const fs::path& dir) {
  Dataset d;
  try {
    const json j = json::parse(read_file(dir / "manifest.json"));
    if (j.at("format") != "hcn-dataset") throw IoError("not a dataset manifest");
    d.name = j.value("name", "");
    d.seed = j.value("seed", std::uint64_t{0});
    d.images = load_images(dir, j.at("images"));
    if (j.contains("labels")) d.labels = j["labels"].get<std::vector<std::size_t>>();
    if (j.contains("clean")) d.clean = load_images(dir, j["clean"]);
    if (j.contains("planted_top")) d.planted_top = load_images(dir, j["planted_top"]);
    if (j.contains("planted")) {
      d.planted.emplace_back();
      for (const auto& p : j["planted"]) d.planted.push_back(load_weights(dir / p.get<std::string>()));
    }
  } catch (const json::exception& e) {
    throw IoError(dir.string() + ": bad dataset manifest: " + e.what());
  }
  try {
    d.validate();
  } catch (const model::ShapeError& e) {
    throw IoError(dir.string() + ": " + e.what());
  }
  return d;
}

// ---- misc ----

BinaryTensor3 tile_grid(std::span<const BinaryTensor3> tiles, std::size_t per_row) {
  if (tiles.empty()) return BinaryTensor3(1, 1, 1);
  if (per_row == 0) per_row = 1;
  const std::size_t th = tiles[0].rows(), tw = tiles[0].cols();
  const std::size_t cols = std::min(per_row, tiles.size());
  const std::size_t rows = (tiles.size() + cols - 1) / cols;
  BinaryTensor3 grid(1, rows * (th + 1) - 1, cols * (tw + 1) - 1);
  for (std::size_t i = 0; i < tiles.size(); ++i) {
    if (tiles[i].rows() != th || tiles[i].cols() != tw) throw model::ShapeError("grid tiles differ in size");
    const std::size_t r0 = (i / cols) * (th + 1), c0 = (i % cols) * (tw + 1);
    for (std::size_t r = 0; r < th; ++r)
      for (std::size_t c = 0; c < tw; ++c)
        if (tiles[i](0, r, c)) grid.set(0, r0 + r, c0 + c, true);
  }
  return grid;
}

namespace {

std::uint32_t get_be32(const std::string& s, std::size_t at) {
  if (s.size() < at + 4) throw IoError("truncated idx header");
  std::uint32_t v = 0;
  for (int k = 0; k < 4; ++k) v = (v << 8) | static_cast<unsigned char>(s[at + k]);
  return v;
}

}  // namespace

std::vector<BinaryTensor3> load_idx_images(const fs::path& path, std::size_t limit, int threshold) {
  const std::string bytes = read_file(path);
  if (get_be32(bytes, 0) != 0x00000803U) throw IoError(path.string() + ": not an idx3 image file");
  std::size_t n = get_be32(bytes, 4);
  const std::size_t h = get_be32(bytes, 8), w = get_be32(bytes, 12);
  if (limit) n = std::min(n, limit);
  if (bytes.size() < 16 + n * h * w) throw IoError(path.string() + ": truncated idx payload");
  std::vector<BinaryTensor3> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    BinaryTensor3 img(1, h, w);
    for (std::size_t p = 0; p < h * w; ++p)
      img.set(p, static_cast<unsigned char>(bytes[16 + i * h * w + p]) >= threshold);
    out.push_back(std::move(img));
  }
  return out;
}

std::vector<std::size_t> load_idx_labels(const fs::path& path, std::size_t limit) {
  const std::string bytes = read_file(path);
  if (get_be32(bytes, 0) != 0x00000801U) throw IoError(path.string() + ": not an idx1 label file");
  std::size_t n = get_be32(bytes, 4);
  if (limit) n = std::min(n, limit);
  if (bytes.size() < 8 + n) throw IoError(path.string() + ": truncated idx payload");
  std::vector<std::size_t> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = static_cast<unsigned char>(bytes[8 + i]);
  return out;
}

}  // namespace hcn::data
