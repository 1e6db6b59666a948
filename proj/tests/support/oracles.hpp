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

// Independent reference implementations used to check the library.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lidargen/diffusion.hpp"
#include "lidargen/geometry.hpp"
#include "lidargen/synth.hpp"

namespace lidargen::testing {

/// BEV cells of side `res` are counted when their center lies in both
/// footprints; the vertical overlap is exact because boxes only carry yaw.
double voxel_iou_3d(const Box3D& a, const Box3D& b, double res);

double brute_chamfer(const std::vector<Vec3>& x, const std::vector<Vec3>& y);

/// Fixed-step march from `origin` along unit `dir`, refined by bisection.
std::optional<double> ray_march(const Vec3& origin, const Vec3& dir, const Box3D& box, double step,
                                double max_range);

double normal_cdf(double x, double mean, double stddev);
/// One-sample Kolmogorov-Smirnov statistic against N(mean, stddev^2).
double ks_statistic(std::vector<double> samples, double mean, double stddev);
/// Asymptotic two-sided 1% critical value.
double ks_critical_1pct(std::size_t n);

/// Central differences of f at x with step h.
Eigen::VectorXd central_difference(const std::function<double(const Eigen::VectorXd&)>& f, const Eigen::VectorXd& x,
                                   double h);

/// Unconditional 2D training set: encoded (cx, cy) of cars parked on two lanes
/// at y = +-2 m, uniform along x in [-30, 30] m.
TrainingSet lane_centre_codes(int n, std::uint64_t seed);

/// Ground plus six stationary boxes, ego driving a gentle left curve over
/// four steps.
SceneSpec probe_scene();

class TempDir {
 public:
  explicit TempDir(const std::string& tag);
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

std::vector<std::uint8_t> file_bytes(const std::filesystem::path& p);

}  // namespace lidargen::testing
