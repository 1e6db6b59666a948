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

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "lidargen/geometry.hpp"

namespace lidargen {

/// Spherical projection parameters. Angles in radians.
struct SensorConfig {
  int width = 1024;
  int height = 32;
  double fov_up = 10.0 * 3.14159265358979323846 / 180.0;
  double fov_down = -30.0 * 3.14159265358979323846 / 180.0;
  double max_range = 80.0;
  double sensor_height = 1.84;

  double vertical_fov() const { return fov_up - fov_down; }
  /// Throws kInvalidInput when the invariants do not hold.
  void validate() const;
  bool operator==(const SensorConfig&) const = default;
};

struct Pixel {
  int row = 0;
  int col = 0;
  bool operator==(const Pixel&) const = default;
};

/// H x W grid with depth (meters), intensity and a validity mask. Depth and
/// intensity are stored as float, matching the tensor file format; invalid
/// pixels hold zeros.
class RangeImage {
 public:
  RangeImage() = default;
  RangeImage(int height, int width);

  int height() const { return height_; }
  int width() const { return width_; }
  std::size_t pixel_count() const { return mask_.size(); }

  bool valid(int row, int col) const { return mask_[offset(row, col)] != 0; }
  float depth(int row, int col) const { return depth_[offset(row, col)]; }
  float intensity(int row, int col) const { return intensity_[offset(row, col)]; }

  void set(int row, int col, float depth, float intensity);
  void clear(int row, int col);

  std::size_t valid_count() const;

  bool operator==(const RangeImage&) const = default;

 private:
  std::size_t offset(int row, int col) const {
    return static_cast<std::size_t>(row) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(col);
  }

  int height_ = 0;
  int width_ = 0;
  std::vector<float> depth_;
  std::vector<float> intensity_;
  std::vector<std::uint8_t> mask_;
};

/// Continuous image coordinates (u along width, v along height) before
/// flooring.
Vec2 image_coordinates(const Vec3& p, const SensorConfig& cfg);

/// Pixel a point falls in, or nullopt when it is outside the image, at the
/// origin, or beyond max_range.
std::optional<Pixel> pixel_of(const Vec3& p, const SensorConfig& cfg);

/// Unit ray through the center of a pixel.
Vec3 pixel_ray(int row, int col, const SensorConfig& cfg);

/// Angular pitch of one pixel (azimuth, elevation).
Vec2 angular_pitch(const SensorConfig& cfg);

/// Spherical projection with a nearest-depth z-buffer.
RangeImage project(const PointCloud& cloud, const SensorConfig& cfg);

/// One point per valid pixel, on the pixel-center ray. Row-major order.
PointCloud unproject(const RangeImage& image, const SensorConfig& cfg);

/// log2(d + 1) / log2(d_max + 1). Throws kDomain outside [0, d_max].
double normalize_depth(double depth, const SensorConfig& cfg);
/// Inverse of normalize_depth. Throws kDomain outside [0, 1].
double denormalize_depth(double normalized, const SensorConfig& cfg);

/// Dense channel-last float tensor, shape H x W x C.
struct RangeTensor {
  int height = 0;
  int width = 0;
  int channels = 0;
  std::vector<float> data;

  RangeTensor() = default;
  RangeTensor(int h, int w, int c)
      : height(h), width(w), channels(c),
        data(static_cast<std::size_t>(h) * static_cast<std::size_t>(w) * static_cast<std::size_t>(c),
             0.0f) {}

  std::size_t index(int row, int col, int ch) const {
    return (static_cast<std::size_t>(row) * static_cast<std::size_t>(width) +
            static_cast<std::size_t>(col)) *
               static_cast<std::size_t>(channels) +
           static_cast<std::size_t>(ch);
  }
  float& at(int row, int col, int ch) { return data[index(row, col, ch)]; }
  float at(int row, int col, int ch) const { return data[index(row, col, ch)]; }

  bool operator==(const RangeTensor&) const = default;
};

inline constexpr int kDepthChannel = 0;
inline constexpr int kIntensityChannel = 1;
inline constexpr int kMaskChannel = 2;
inline constexpr int kRangeTensorChannels = 3;

/// Model-space tensor: depth 2*normalize_depth-1, intensity 2*i-1, mask in
/// {0,1}; invalid pixels carry -1 in both value channels.
RangeTensor encode_tensor(const RangeImage& image, const SensorConfig& cfg);

/// Inverse of encode_tensor. Pixels with mask <= 0.5, or whose decoded depth
/// is not positive, come back invalid; values are clamped into range so that
/// generated tensors decode to a valid image.
RangeImage decode_tensor(const RangeTensor& tensor, const SensorConfig& cfg);

}  // namespace lidargen
