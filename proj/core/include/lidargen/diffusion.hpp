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
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "lidargen/rng.hpp"

namespace lidargen {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Discrete noise schedule with alpha_bar[0] = 1 and T further entries.
struct NoiseSchedule {
  int steps = 0;
  std::vector<double> alpha_bar;  // size steps + 1
  std::vector<double> betas;      // size steps + 1, betas[0] = 0

  double alpha_bar_at(int t) const;
};

/// alpha_bar_t = f(t) / f(0), f(t) = cos^2(((t/T + s) / (1 + s)) * pi/2), with
/// each beta clipped to 0.999 and alpha_bar rebuilt as the running product.
NoiseSchedule cosine_schedule(int steps, double s = 0.008);

/// Uniformly strided subsequence 0 = tau_0 < ... < tau_S = T with
/// tau_k = round(k T / S). Throws kInvalidInput unless 1 <= S <= T.
std::vector<int> respaced_timesteps(int total_steps, int sample_steps);

/// x_t = sqrt(ab_t) x0 + sqrt(1 - ab_t) eps. Rows are samples.
MatrixXd q_sample(const MatrixXd& x0, int t, const MatrixXd& eps, const NoiseSchedule& schedule);

/// Epsilon predictor. `x` and `cond` share row count; `timestep` indexes the
/// training schedule.
class Denoiser {
 public:
  virtual ~Denoiser() = default;
  virtual int dim() const = 0;
  virtual int cond_dim() const = 0;
  virtual MatrixXd predict(const MatrixXd& x, int timestep, const MatrixXd& cond) const = 0;
};

/// Posterior-mean epsilon for a N(mu0, sigma0^2) target (per dimension).
VectorXd oracle_gaussian_eps(const VectorXd& x_t, int t, const VectorXd& mu0,
                             const VectorXd& sigma0, const NoiseSchedule& schedule);

/// Exact epsilon predictor for an axis-aligned Gaussian target.
class GaussianOracleDenoiser final : public Denoiser {
 public:
  GaussianOracleDenoiser(VectorXd mean, VectorXd stddev, NoiseSchedule schedule);
  int dim() const override { return static_cast<int>(mean_.size()); }
  int cond_dim() const override { return 0; }
  MatrixXd predict(const MatrixXd& x, int timestep, const MatrixXd& cond) const override;

 private:
  VectorXd mean_;
  VectorXd stddev_;
  NoiseSchedule schedule_;
};

/// Oracle whose Gaussian target depends on the condition row.
class ConditionalGaussianOracle final : public Denoiser {
 public:
  using TargetFn = std::function<std::pair<VectorXd, VectorXd>(const VectorXd& cond)>;
  ConditionalGaussianOracle(int dim, int cond_dim, TargetFn target, NoiseSchedule schedule);
  int dim() const override { return dim_; }
  int cond_dim() const override { return cond_dim_; }
  MatrixXd predict(const MatrixXd& x, int timestep, const MatrixXd& cond) const override;

 private:
  int dim_;
  int cond_dim_;
  TargetFn target_;
  NoiseSchedule schedule_;
};

/// Ancestral sampling over the respaced subsequence. Starts from N(0, I),
/// uses the posterior q(x_prev | x_t, x0_hat) recomputed for each stride and
/// adds no noise on the final step. Returns rows x dim.
MatrixXd p_sample_loop(const Denoiser& denoiser, const MatrixXd& cond, int rows,
                       const NoiseSchedule& schedule, int sample_steps, Rng& rng);

/// One reverse step from t to t_prev given a predicted epsilon; `noise` is
/// ignored when t_prev == 0.
MatrixXd p_sample_step(const MatrixXd& x_t, const MatrixXd& eps_hat, int t, int t_prev,
                       const NoiseSchedule& schedule, const MatrixXd& noise);

enum class Activation : std::uint8_t { kSiLU, kTanh };

/// Fully connected layers, stored out x in.
struct MlpParams {
  std::vector<MatrixXd> weights;
  std::vector<VectorXd> biases;

  std::size_t parameter_count() const;
  VectorXd flatten() const;
  /// Inverse of flatten; the shapes of *this are kept.
  void assign(const VectorXd& flat);
  bool operator==(const MlpParams& other) const;
};

struct MlpSpec {
  int data_dim = 2;
  int cond_dim = 0;
  int time_embed_dim = 16;
  std::vector<int> hidden = {128, 128};
  Activation activation = Activation::kSiLU;

  int input_dim() const { return data_dim + time_embed_dim + cond_dim; }
  bool operator==(const MlpSpec&) const = default;
};

/// Sinusoidal embedding of integer timesteps: [sin(t w_i), cos(t w_i)] with
/// w_i = 10000^(-i / (E/2)).
MatrixXd timestep_embedding(const std::vector<int>& timesteps, int dim);

/// Default initialization: weights N(0, 1/fan_in), biases zero.
MlpParams init_mlp(const MlpSpec& spec, Rng& rng);

/// Forward pass for one timestep per row.
MatrixXd mlp_eps(const MlpSpec& spec, const MlpParams& params, const MatrixXd& x_t,
                 const std::vector<int>& timesteps, const MatrixXd& cond);

/// Everything random about one loss evaluation, fixed up front.
struct TrainingBatch {
  MatrixXd x0;
  MatrixXd cond;
  std::vector<int> timesteps;
  MatrixXd noise;
};

struct LossAndGrad {
  double loss = 0.0;
  MlpParams grads;
};

/// Mean over rows and dims of (eps - eps_theta(x_t, t, c))^2 and its exact
/// gradient.
LossAndGrad mlp_gradients(const MlpSpec& spec, const MlpParams& params, const TrainingBatch& batch,
                          const NoiseSchedule& schedule);
double mlp_loss(const MlpSpec& spec, const MlpParams& params, const TrainingBatch& batch,
                const NoiseSchedule& schedule);

class MlpDenoiser final : public Denoiser {
 public:
  MlpDenoiser(MlpSpec spec, MlpParams params, int train_steps);
  int dim() const override { return spec_.data_dim; }
  int cond_dim() const override { return spec_.cond_dim; }
  MatrixXd predict(const MatrixXd& x, int timestep, const MatrixXd& cond) const override;

  const MlpSpec& spec() const { return spec_; }
  const MlpParams& params() const { return params_; }
  int train_steps() const { return train_steps_; }

 private:
  MlpSpec spec_;
  MlpParams params_;
  int train_steps_;
};

struct TrainConfig {
  int diffusion_steps = 1024;
  int iterations = 2000;
  int batch_size = 64;
  double learning_rate = 1e-4;
  int warmup_steps = 10000;
  double beta1 = 0.9;
  double beta2 = 0.99;
  double adam_eps = 1e-8;
  double ema_decay = 0.995;
  int ema_every = 10;
  int log_every = 100;
  int eval_batch_size = 256;
  std::uint64_t seed = 0;
  int time_embed_dim = 16;
  std::vector<int> hidden = {128, 128};
  Activation activation = Activation::kSiLU;
};

struct TrainingSet {
  MatrixXd x0;
  MatrixXd cond;  // rows match x0; zero columns when unconditional
};

struct TrainLogEntry {
  int step = 0;
  double learning_rate = 0.0;
  double batch_loss = 0.0;
  double eval_loss = 0.0;  // fixed seeded batch, raw (non-EMA) parameters
};

struct TrainResult {
  MlpSpec spec;
  int diffusion_steps = 0;
  MlpParams raw;
  MlpParams ema;
  std::vector<TrainLogEntry> log;

  MlpDenoiser denoiser() const;
};

/// Adam with linear warm-up and periodic EMA. Entry 0 of the log is the
/// initial state; afterwards steps 1..10 and every `log_every` are logged.
/// Throws kInvalidInput on an empty dataset.
TrainResult train_denoiser(const TrainingSet& data, const TrainConfig& cfg);

std::string_view activation_name(Activation a);

}  // namespace lidargen
