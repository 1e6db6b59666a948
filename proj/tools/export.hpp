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

#include <cstdint>
#include <filesystem>
#include <vector>

#include "lidargen/metrics.hpp"
#include "lidargen/range_codec.hpp"

namespace lidargen::tools {

/// 8-bit grayscale raster, row-major, row 0 at the top.
struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;
};

/// Log-scaled point mass per BEV cell, +x pointing up.
GrayImage bev_image(const BevHistogram& hist);
/// Depth scaled by max_range; invalid pixels are black.
GrayImage range_image(const RangeImage& image, const SensorConfig& cfg);

void write_png(const GrayImage& image, const std::filesystem::path& path);
/// "x_bin,y_bin,mass" for every non-empty cell.
void write_bev_csv(const BevHistogram& hist, const std::filesystem::path& path);
/// One line per row, depth in meters, 0 where invalid.
void write_range_csv(const RangeImage& image, const std::filesystem::path& path);

}  // namespace lidargen::tools
