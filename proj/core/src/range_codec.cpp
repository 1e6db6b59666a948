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

#include "lidargen/range_codec.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "lidargen/errors.hpp"

namespace lidargen {

void SensorConfig::validate() const {
  if (width < 1 || height < 1) fail(ErrorCode::kInvalidInput, "sensor width/height must be >= 1");
  if (!(fov_up > fov_down)) fail(ErrorCode::kInvalidInput, "sensor fov_up must exceed fov_down");
  if (!(max_range > 0.0)) fail(ErrorCode::kInvalidInput, "sensor max_range must be > 0");
  if (!std::isfinite(fov_up) || !std::isfinite(fov_down) || !std::isfinite(sensor_height)) {
    fail(ErrorCode::kInvalidInput, "sensor config has non-finite values");
  }
}

RangeImage::RangeImage(int height, int width) : height_(height), width_(width) {
  if (height < 0 || width < 0) fail(ErrorCode::kInvalidInput, "negative image size");
  const auto n = static_cast<std::size_t>(height) * static_cast<std::size_t>(width);
  depth_.assign(n, 0.0f);
  intensity_.assign(n, 0.0f);
  mask_.assign(n, 0);
}

void RangeImage::set(int row, int col, float depth, float intensity) {
  const auto i = offset(row, col);
  depth_[i] = depth;
  intensity_[i] = intensity;
  mask_[i] = 1;
}

void RangeImage::clear(int row, int col) {
  const auto i = offset(row, col);
  depth_[i] = 0.0f;
  intensity_[i] = 0.0f;
  mask_[i] = 0;
}

std::size_t RangeImage::valid_count() const {
  return static_cast<std::size_t>(std::count(mask_.begin(), mask_.end(), std::uint8_t{1}));
}

Vec2 image_coordinates(const Vec3& p, const SensorConfig& cfg) {
  const double r = p.norm();
  const double azimuth = std::atan2(p.y(), p.x());
  const double elevation = std::asin(std::clamp(p.z() / r, -1.0, 1.0));
  const double u = 0.5 * (1.0 - azimuth / std::numbers::pi) * cfg.width;
  const double v = (1.0 - (elevation - cfg.fov_down) / cfg.vertical_fov()) * cfg.height;
  return {u, v};
}

std::optional<Pixel> pixel_of(const Vec3& p, const SensorConfig& cfg) {
  const double r = p.norm();
  // A few ulps of slack so that points unprojected at exactly max_range
  // survive re-projection.
  constexpr double kRangeSlack = 1.0 + 8.0 * std::numeric_limits<double>::epsilon();
  if (!(r > 0.0) || r > cfg.max_range * kRangeSlack) return std::nullopt;
  const Vec2 uv = image_coordinates(p, cfg);
  auto col = static_cast<long>(std::floor(uv.x()));
  const auto row = static_cast<long>(std::floor(uv.y()));
  // Azimuth is periodic: atan2 == -pi (y = -0.0) lands exactly on u = W.
  if (col == cfg.width) col = 0;
  if (col < 0 || col >= cfg.width || row < 0 || row >= cfg.height) return std::nullopt;
  return Pixel{static_cast<int>(row), static_cast<int>(col)};
}

Vec3 pixel_ray(int row, int col, const SensorConfig& cfg) {
  const double u = col + 0.5;
  const double v = row + 0.5;
  const double azimuth = std::numbers::pi * (1.0 - 2.0 * u / cfg.width);
  const double elevation = (1.0 - v / cfg.height) * cfg.vertical_fov() + cfg.fov_down;
  const double ce = std::cos(elevation);
  return {ce * std::cos(azimuth), ce * std::sin(azimuth), std::sin(elevation)};
}

Vec2 angular_pitch(const SensorConfig& cfg) {
  return {2.0 * std::numbers::pi / cfg.width, cfg.vertical_fov() / cfg.height};
}

RangeImage project(const PointCloud& cloud, const SensorConfig& cfg) {
  cfg.validate();
  RangeImage image(cfg.height, cfg.width);
  std::vector<double> best(image.pixel_count(), std::numeric_limits<double>::infinity());
  // Largest float not above max_range, so stored depths never exceed it.
  float depth_cap = static_cast<float>(cfg.max_range);
  if (static_cast<double>(depth_cap) > cfg.max_range) {
    depth_cap = std::nextafter(depth_cap, 0.0f);
  }
  for (const auto& pt : cloud) {
    const Vec3 p = pt.position();
    const auto px = pixel_of(p, cfg);
    if (!px) continue;
    const double r = p.norm();
    const auto slot = static_cast<std::size_t>(px->row) * static_cast<std::size_t>(cfg.width) +
                      static_cast<std::size_t>(px->col);
    if (r < best[slot]) {
      const float depth = std::min(static_cast<float>(r), depth_cap);
      if (!(depth > 0.0f)) continue;
      best[slot] = r;
      image.set(px->row, px->col, depth, static_cast<float>(pt.intensity));
    }
  }
  return image;
}

PointCloud unproject(const RangeImage& image, const SensorConfig& cfg) {
  cfg.validate();
  if (image.height() != cfg.height || image.width() != cfg.width) {
    fail(ErrorCode::kShapeMismatch, "range image shape does not match the sensor config");
  }
  PointCloud cloud;
  cloud.points.reserve(image.valid_count());
  for (int row = 0; row < image.height(); ++row) {
    for (int col = 0; col < image.width(); ++col) {
      if (!image.valid(row, col)) continue;
      const Vec3 p = pixel_ray(row, col, cfg) * static_cast<double>(image.depth(row, col));
      cloud.push_back(LidarPoint::at(p, static_cast<double>(image.intensity(row, col))));
    }
  }
  return cloud;
}

double normalize_depth(double depth, const SensorConfig& cfg) {
  if (!(depth >= 0.0 && depth <= cfg.max_range)) {
    fail(ErrorCode::kDomain, "depth " + std::to_string(depth) + " outside [0, max_range]");
  }
  return std::log2(depth + 1.0) / std::log2(cfg.max_range + 1.0);
}

double denormalize_depth(double normalized, const SensorConfig& cfg) {
  if (!(normalized >= 0.0 && normalized <= 1.0)) {
    fail(ErrorCode::kDomain, "normalized depth " + std::to_string(normalized) + " outside [0, 1]");
  }
  return std::exp2(normalized * std::log2(cfg.max_range + 1.0)) - 1.0;
}

RangeTensor encode_tensor(const RangeImage& image, const SensorConfig& cfg) {
  RangeTensor t(image.height(), image.width(), kRangeTensorChannels);
  for (int row = 0; row < image.height(); ++row) {
    for (int col = 0; col < image.width(); ++col) {
      if (!image.valid(row, col)) {
        t.at(row, col, kDepthChannel) = -1.0f;
        t.at(row, col, kIntensityChannel) = -1.0f;
        t.at(row, col, kMaskChannel) = 0.0f;
        continue;
      }
      const double d = normalize_depth(image.depth(row, col), cfg);
      t.at(row, col, kDepthChannel) = static_cast<float>(2.0 * d - 1.0);
      t.at(row, col, kIntensityChannel) =
          static_cast<float>(2.0 * static_cast<double>(image.intensity(row, col)) - 1.0);
      t.at(row, col, kMaskChannel) = 1.0f;
    }
  }
  return t;
}

RangeImage decode_tensor(const RangeTensor& tensor, const SensorConfig& cfg) {
  if (tensor.channels != kRangeTensorChannels) {
    fail(ErrorCode::kShapeMismatch, "range tensor must have 3 channels (depth, intensity, mask)");
  }
  if (tensor.data.size() != static_cast<std::size_t>(tensor.height) *
                                static_cast<std::size_t>(tensor.width) * 3u) {
    fail(ErrorCode::kShapeMismatch, "range tensor data size does not match H*W*C");
  }
  RangeImage image(tensor.height, tensor.width);
  for (int row = 0; row < tensor.height; ++row) {
    for (int col = 0; col < tensor.width; ++col) {
      if (!(tensor.at(row, col, kMaskChannel) > 0.5f)) continue;
      const double dn = std::clamp(0.5 * (static_cast<double>(tensor.at(row, col, kDepthChannel)) + 1.0), 0.0, 1.0);
      const double depth = denormalize_depth(dn, cfg);
      const float stored = static_cast<float>(std::min(depth, cfg.max_range));
      if (!(stored > 0.0f)) continue;
      const double in =
          std::clamp(0.5 * (static_cast<double>(tensor.at(row, col, kIntensityChannel)) + 1.0), 0.0, 1.0);
      image.set(row, col, stored, static_cast<float>(in));
    }
  }
  return image;
}

}  // namespace lidargen
