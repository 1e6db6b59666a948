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

#include <gtest/gtest.h>

#include <cstring>
#include <functional>

#include "lidargen/errors.hpp"
#include "lidargen/io.hpp"
#include "lidargen/rng.hpp"
#include "oracles.hpp"

namespace lidargen {
namespace {

using Bytes = std::vector<std::uint8_t>;

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kInvalidInput;
}

PointCloud float_cloud(Rng& rng, int n) {
  PointCloud c;
  for (int i = 0; i < n; ++i) {
    c.push_back({static_cast<float>(rng.normal(0, 20)), static_cast<float>(rng.normal(0, 20)),
                 static_cast<float>(rng.normal(0, 2)), static_cast<float>(rng.uniform())});
  }
  return c;
}

TEST(PointCloudFile, LayoutIsLittleEndian) {
  PointCloud c;
  c.push_back({1.0, -2.0, 0.5, 0.25});
  const Bytes b = encode_pointcloud(c);
  ASSERT_EQ(b.size(), 4u + 4u + 4u + 16u);
  EXPECT_EQ(std::string(b.begin(), b.begin() + 4), "LCPC");
  EXPECT_EQ(Bytes(b.begin() + 4, b.begin() + 12), Bytes({1, 0, 0, 0, 1, 0, 0, 0}));
  // 1.0f = 0x3f800000, -2.0f = 0xc0000000
  EXPECT_EQ(Bytes(b.begin() + 12, b.begin() + 20), Bytes({0x00, 0x00, 0x80, 0x3f, 0x00, 0x00, 0x00, 0xc0}));
}

TEST(PointCloudFile, RoundTrip) {
  Rng rng(1);
  const PointCloud c = float_cloud(rng, 300);
  EXPECT_EQ(decode_pointcloud(encode_pointcloud(c)), c);
  EXPECT_EQ(decode_pointcloud(encode_pointcloud(PointCloud{})), PointCloud{});
  testing::TempDir dir("io");
  write_pointcloud(c, dir.path() / "a.lcpc");
  EXPECT_EQ(read_pointcloud(dir.path() / "a.lcpc"), c);
}

TEST(PointCloudFile, DistinctErrors) {
  Rng rng(2);
  const Bytes good = encode_pointcloud(float_cloud(rng, 3));
  Bytes magic = good;
  magic[0] = 'X';
  EXPECT_EQ(code_of([&] { decode_pointcloud(magic); }), ErrorCode::kBadMagic);
  Bytes version = good;
  version[4] = 2;
  EXPECT_EQ(code_of([&] { decode_pointcloud(version); }), ErrorCode::kUnsupportedVersion);
  const Bytes shortened(good.begin(), good.end() - 4);
  EXPECT_EQ(code_of([&] { decode_pointcloud(shortened); }), ErrorCode::kTruncated);
  Bytes longer = good;
  longer.push_back(0);
  EXPECT_EQ(code_of([&] { decode_pointcloud(longer); }), ErrorCode::kCountMismatch);
  const Bytes header_only(good.begin(), good.begin() + 6);
  EXPECT_EQ(code_of([&] { decode_pointcloud(header_only); }), ErrorCode::kTruncated);
}

TEST(RangeTensorFile, RoundTripAndShapeErrors) {
  RangeTensor t(4, 6, 3);
  Rng rng(3);
  for (auto& v : t.data) v = static_cast<float>(rng.normal());
  const Bytes b = encode_range_tensor(t);
  EXPECT_EQ(b.size(), 4u + 16u + 4u * 72u);
  EXPECT_EQ(std::string(b.begin(), b.begin() + 4), "LCRT");
  EXPECT_EQ(decode_range_tensor(b), t);
  Bytes wrong = b;
  wrong[8] = 5;  // H = 5 while the payload holds 4 rows
  EXPECT_EQ(code_of([&] { decode_range_tensor(wrong); }), ErrorCode::kTruncated);
  Bytes extra = b;
  extra.insert(extra.end(), 4, 0);
  EXPECT_EQ(code_of([&] { decode_range_tensor(extra); }), ErrorCode::kCountMismatch);
  EXPECT_EQ(code_of([&] { decode_range_tensor(encode_pointcloud(PointCloud{})); }), ErrorCode::kBadMagic);
}

TEST(DenoiserFile, RoundTrip) {
  MlpSpec spec;
  spec.data_dim = 3;
  spec.cond_dim = 2;
  spec.hidden = {16, 8};
  spec.activation = Activation::kTanh;
  Rng rng(4);
  const MlpDenoiser m(spec, init_mlp(spec, rng), 512);
  const Bytes b = encode_denoiser(m);
  EXPECT_EQ(std::string(b.begin(), b.begin() + 4), "LCDN");
  const MlpDenoiser back = decode_denoiser(b);
  EXPECT_EQ(back.spec(), spec);
  EXPECT_EQ(back.train_steps(), 512);
  EXPECT_EQ(encode_denoiser(back), b);
  const Bytes cut(b.begin(), b.end() - 1);
  EXPECT_EQ(code_of([&] { decode_denoiser(cut); }), ErrorCode::kTruncated);
}

TEST(Files, MissingPathIsNamed) {
  try {
    read_pointcloud("/definitely/not/here.lcpc");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIo);
    EXPECT_NE(std::string(e.what()).find("/definitely/not/here.lcpc"), std::string::npos);
  }
}

}  // namespace
}  // namespace lidargen
