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

#include "export.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <sstream>

#include "lidargen/errors.hpp"
#include "lidargen/io.hpp"

namespace lidargen::tools {

GrayImage bev_image(const BevHistogram& hist) {
  const int n = hist.grid.bins;
  GrayImage img{n, n, std::vector<std::uint8_t>(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0)};
  double peak = 0.0;
  for (double m : hist.mass) peak = std::max(peak, m);
  if (peak <= 0.0) return img;
  const double scale = std::log1p(peak * 1e4);
  for (int ix = 0; ix < n; ++ix) {
    for (int iy = 0; iy < n; ++iy) {
      const double m = hist.mass[static_cast<std::size_t>(iy) * static_cast<std::size_t>(n) + static_cast<std::size_t>(ix)];
      const int row = n - 1 - ix;
      const int col = n - 1 - iy;
      img.pixels[static_cast<std::size_t>(row) * static_cast<std::size_t>(n) + static_cast<std::size_t>(col)] =
          static_cast<std::uint8_t>(std::lround(255.0 * std::log1p(m * 1e4) / scale));
    }
  }
  return img;
}

GrayImage range_image(const RangeImage& image, const SensorConfig& cfg) {
  GrayImage img{image.width(), image.height(), std::vector<std::uint8_t>(image.pixel_count(), 0)};
  for (int r = 0; r < image.height(); ++r) {
    for (int c = 0; c < image.width(); ++c) {
      if (!image.valid(r, c)) continue;
      const double v = std::clamp(static_cast<double>(image.depth(r, c)) / cfg.max_range, 0.0, 1.0);
      img.pixels[static_cast<std::size_t>(r) * static_cast<std::size_t>(image.width()) + static_cast<std::size_t>(c)] =
          static_cast<std::uint8_t>(std::lround(40.0 + 215.0 * (1.0 - v)));
    }
  }
  return img;
}

void write_png(const GrayImage& image, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::unique_ptr<FILE, int (*)(FILE*)> fp(std::fopen(path.string().c_str(), "wb"), &std::fclose);
  if (!fp) fail(ErrorCode::kIo, path.string() + ": cannot open for writing");
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (png == nullptr || info == nullptr) {
    png_destroy_write_struct(&png, &info);
    fail(ErrorCode::kIo, "libpng initialisation failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    fail(ErrorCode::kIo, path.string() + ": PNG encoding failed");
  }
  png_init_io(png, fp.get());
  png_set_IHDR(png, info, static_cast<png_uint_32>(image.width), static_cast<png_uint_32>(image.height), 8,
               PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (int r = 0; r < image.height; ++r) {
    png_write_row(png, image.pixels.data() + static_cast<std::size_t>(r) * static_cast<std::size_t>(image.width));
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

void write_bev_csv(const BevHistogram& hist, const std::filesystem::path& path) {
  std::ostringstream out;
  out << "x_bin,y_bin,mass\n";
  const int n = hist.grid.bins;
  for (int ix = 0; ix < n; ++ix) {
    for (int iy = 0; iy < n; ++iy) {
      const double m = hist.mass[static_cast<std::size_t>(iy) * static_cast<std::size_t>(n) + static_cast<std::size_t>(ix)];
      if (m > 0.0) out << ix << ',' << iy << ',' << m << '\n';
    }
  }
  write_text_file(path, out.str());
}

void write_range_csv(const RangeImage& image, const std::filesystem::path& path) {
  std::ostringstream out;
  for (int r = 0; r < image.height(); ++r) {
    for (int c = 0; c < image.width(); ++c) {
      if (c > 0) out << ',';
      out << (image.valid(r, c) ? image.depth(r, c) : 0.0f);
    }
    out << '\n';
  }
  write_text_file(path, out.str());
}

}  // namespace lidargen::tools
