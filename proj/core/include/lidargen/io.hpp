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
#include <span>
#include <vector>

#include "lidargen/diffusion.hpp"
#include "lidargen/geometry.hpp"
#include "lidargen/range_codec.hpp"

namespace lidargen {

// Binary formats, all little-endian:
//   point cloud  "LCPC" u32 version=1, u32 count, count x (x, y, z, intensity) f32
//   range tensor "LCRT" u32 version=1, u32 H, u32 W, u32 C, H*W*C f32 channel-last
//   denoiser     "LCDN" u32 version=1, u32 data_dim, u32 cond_dim,
//                u32 time_embed_dim, u32 activation (0 silu, 1 tanh),
//                u32 train_steps, u32 layers, layers x u32 hidden width,
//                then per layer W (row-major, out x in) and b as f32
// A payload shorter than its header declares is kTruncated; trailing bytes
// are kCountMismatch.

inline constexpr std::uint32_t kFormatVersion = 1;

std::vector<std::uint8_t> encode_pointcloud(const PointCloud& cloud);
PointCloud decode_pointcloud(std::span<const std::uint8_t> bytes);

std::vector<std::uint8_t> encode_range_tensor(const RangeTensor& tensor);
RangeTensor decode_range_tensor(std::span<const std::uint8_t> bytes);

std::vector<std::uint8_t> encode_denoiser(const MlpDenoiser& model);
MlpDenoiser decode_denoiser(std::span<const std::uint8_t> bytes);

/// Throws kIo naming the path.
std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);
std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

PointCloud read_pointcloud(const std::filesystem::path& path);
void write_pointcloud(const PointCloud& cloud, const std::filesystem::path& path);
RangeTensor read_range_tensor(const std::filesystem::path& path);
void write_range_tensor(const RangeTensor& tensor, const std::filesystem::path& path);
MlpDenoiser read_denoiser(const std::filesystem::path& path);
void write_denoiser(const MlpDenoiser& model, const std::filesystem::path& path);

}  // namespace lidargen
