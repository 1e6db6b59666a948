// Copyright 2026 The lidargen Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "lidargen/io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "lidargen/errors.hpp"

namespace lidargen {

namespace {

class Writer {
 public:
  void magic(const char* m) { bytes_.insert(bytes_.end(), m, m + 4); }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) bytes_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void f32(double v) { u32(std::bit_cast<std::uint32_t>(static_cast<float>(v))); }
  std::vector<std::uint8_t> take() { return std::move(bytes_); }

 private:
  std::vector<std::uint8_t> bytes_;
};

class Reader {
 public:
  Reader(std::span<const std::uint8_t> bytes, const char* what) : bytes_(bytes), what_(what) {}

  void magic(const char* m) {
    need(4, "header");
    if (std::memcmp(bytes_.data() + pos_, m, 4) != 0) {
      fail(ErrorCode::kBadMagic, std::string(what_) + ": expected magic \"" + m + "\"");
    }
    pos_ += 4;
  }
  void version() {
    const std::uint32_t v = u32("header");
    if (v != kFormatVersion) {
      fail(ErrorCode::kUnsupportedVersion, std::string(what_) + ": unsupported version " + std::to_string(v));
    }
  }
  std::uint32_t u32(const char* field) {
    need(4, field);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(bytes_[pos_ + static_cast<std::size_t>(i)]) << (8 * i);
    pos_ += 4;
    return v;
  }
  float f32(const char* field) { return std::bit_cast<float>(u32(field)); }
  /// Ensures exactly `n` more bytes follow.
  void expect_remaining(std::uint64_t n) {
    const std::uint64_t left = bytes_.size() - pos_;
    if (left < n) {
      fail(ErrorCode::kTruncated, std::string(what_) + ": payload holds " + std::to_string(left) +
                                      " bytes, header declares " + std::to_string(n));
    }
    if (left > n) {
      fail(ErrorCode::kCountMismatch, std::string(what_) + ": " + std::to_string(left - n) +
                                          " bytes beyond the declared payload");
    }
  }

 private:
  void need(std::size_t n, const char* field) {
    if (bytes_.size() - pos_ < n) {
      fail(ErrorCode::kTruncated, std::string(what_) + ": truncated " + field);
    }
  }

  std::span<const std::uint8_t> bytes_;
  const char* what_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<std::uint8_t> encode_pointcloud(const PointCloud& cloud) {
  Writer w;
  w.magic("LCPC");
  w.u32(kFormatVersion);
  w.u32(static_cast<std::uint32_t>(cloud.size()));
  for (const auto& p : cloud) {
    w.f32(p.x);
    w.f32(p.y);
    w.f32(p.z);
    w.f32(p.intensity);
  }
  return w.take();
}

PointCloud decode_pointcloud(std::span<const std::uint8_t> bytes) {
  Reader r(bytes, "point cloud");
  r.magic("LCPC");
  r.version();
  const std::uint32_t count = r.u32("header");
  r.expect_remaining(16ULL * count);
  PointCloud cloud;
  cloud.points.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    LidarPoint p;
    p.x = r.f32("point");
    p.y = r.f32("point");
    p.z = r.f32("point");
    p.intensity = r.f32("point");
    cloud.push_back(p);
  }
  return cloud;
}

std::vector<std::uint8_t> encode_range_tensor(const RangeTensor& tensor) {
  Writer w;
  w.magic("LCRT");
  w.u32(kFormatVersion);
  w.u32(static_cast<std::uint32_t>(tensor.height));
  w.u32(static_cast<std::uint32_t>(tensor.width));
  w.u32(static_cast<std::uint32_t>(tensor.channels));
  for (float v : tensor.data) w.u32(std::bit_cast<std::uint32_t>(v));
  return w.take();
}

RangeTensor decode_range_tensor(std::span<const std::uint8_t> bytes) {
  Reader r(bytes, "range tensor");
  r.magic("LCRT");
  r.version();
  const std::uint32_t h = r.u32("header");
  const std::uint32_t w = r.u32("header");
  const std::uint32_t c = r.u32("header");
  if (h == 0 || w == 0 || c == 0 || h > (1u << 16) || w > (1u << 16) || c > 64) {
    fail(ErrorCode::kInvalidInput, "range tensor: implausible shape");
  }
  r.expect_remaining(4ULL * h * w * c);
  RangeTensor t(static_cast<int>(h), static_cast<int>(w), static_cast<int>(c));
  for (float& v : t.data) v = r.f32("tensor");
  return t;
}

std::vector<std::uint8_t> encode_denoiser(const MlpDenoiser& model) {
  const MlpSpec& s = model.spec();
  Writer w;
  w.magic("LCDN");
  w.u32(kFormatVersion);
  w.u32(static_cast<std::uint32_t>(s.data_dim));
  w.u32(static_cast<std::uint32_t>(s.cond_dim));
  w.u32(static_cast<std::uint32_t>(s.time_embed_dim));
  w.u32(s.activation == Activation::kTanh ? 1u : 0u);
  w.u32(static_cast<std::uint32_t>(model.train_steps()));
  w.u32(static_cast<std::uint32_t>(s.hidden.size()));
  for (int width : s.hidden) w.u32(static_cast<std::uint32_t>(width));
  const MlpParams& p = model.params();
  for (std::size_t l = 0; l < p.weights.size(); ++l) {
    for (Eigen::Index i = 0; i < p.weights[l].rows(); ++i) {
      for (Eigen::Index j = 0; j < p.weights[l].cols(); ++j) w.f32(p.weights[l](i, j));
    }
    for (Eigen::Index i = 0; i < p.biases[l].size(); ++i) w.f32(p.biases[l][i]);
  }
  return w.take();
}

MlpDenoiser decode_denoiser(std::span<const std::uint8_t> bytes) {
  Reader r(bytes, "denoiser");
  r.magic("LCDN");
  r.version();
  MlpSpec s;
  s.data_dim = static_cast<int>(r.u32("header"));
  s.cond_dim = static_cast<int>(r.u32("header"));
  s.time_embed_dim = static_cast<int>(r.u32("header"));
  const std::uint32_t act = r.u32("header");
  if (act > 1) fail(ErrorCode::kInvalidInput, "denoiser: unknown activation " + std::to_string(act));
  s.activation = act == 1 ? Activation::kTanh : Activation::kSiLU;
  const auto train_steps = static_cast<int>(r.u32("header"));
  const std::uint32_t layers = r.u32("header");
  if (layers > 64) fail(ErrorCode::kInvalidInput, "denoiser: implausible layer count");
  s.hidden.clear();
  for (std::uint32_t i = 0; i < layers; ++i) s.hidden.push_back(static_cast<int>(r.u32("header")));
  std::uint64_t floats = 0;
  std::uint64_t fan_in = static_cast<std::uint64_t>(s.input_dim());
  std::vector<int> outs = s.hidden;
  outs.push_back(s.data_dim);
  for (int out : outs) {
    if (out < 1 || out > (1 << 20)) fail(ErrorCode::kInvalidInput, "denoiser: implausible layer width");
    floats += fan_in * static_cast<std::uint64_t>(out) + static_cast<std::uint64_t>(out);
    fan_in = static_cast<std::uint64_t>(out);
  }
  r.expect_remaining(4 * floats);
  MlpParams p;
  int in = s.input_dim();
  for (int out : outs) {
    Eigen::MatrixXd w(out, in);
    for (int i = 0; i < out; ++i) {
      for (int j = 0; j < in; ++j) w(i, j) = r.f32("weights");
    }
    Eigen::VectorXd b(out);
    for (int i = 0; i < out; ++i) b[i] = r.f32("biases");
    p.weights.push_back(std::move(w));
    p.biases.push_back(std::move(b));
    in = out;
  }
  return MlpDenoiser(s, std::move(p), train_steps);
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIo, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) fail(ErrorCode::kIo, "read failed for " + path.string());
  return bytes;
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::kIo, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) fail(ErrorCode::kIo, "write failed for " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  return {bytes.begin(), bytes.end()};
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  write_file(path, std::span<const std::uint8_t>(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

namespace {

template <typename T, typename Decode>
T read_with_path(const std::filesystem::path& path, Decode decode) {
  const auto bytes = read_file(path);
  try {
    return decode(bytes);
  } catch (const Error& e) {
    fail(e.code(), path.string() + ": " + e.what());
  }
}

}  // namespace

PointCloud read_pointcloud(const std::filesystem::path& path) {
  return read_with_path<PointCloud>(path, [](const auto& b) { return decode_pointcloud(b); });
}
void write_pointcloud(const PointCloud& cloud, const std::filesystem::path& path) {
  write_file(path, encode_pointcloud(cloud));
}
RangeTensor read_range_tensor(const std::filesystem::path& path) {
  return read_with_path<RangeTensor>(path, [](const auto& b) { return decode_range_tensor(b); });
}
void write_range_tensor(const RangeTensor& tensor, const std::filesystem::path& path) {
  write_file(path, encode_range_tensor(tensor));
}
MlpDenoiser read_denoiser(const std::filesystem::path& path) {
  return read_with_path<MlpDenoiser>(path, [](const auto& b) { return decode_denoiser(b); });
}
void write_denoiser(const MlpDenoiser& model, const std::filesystem::path& path) {
  write_file(path, encode_denoiser(model));
}

}  // namespace lidargen
