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

#include "lidargen/diffusion.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "lidargen/errors.hpp"

namespace lidargen {

double NoiseSchedule::alpha_bar_at(int t) const {
  if (t < 0 || t > steps) {
    fail(ErrorCode::kInvalidInput, "timestep " + std::to_string(t) + " outside [0, " +
                                       std::to_string(steps) + "]");
  }
  return alpha_bar[static_cast<std::size_t>(t)];
}

NoiseSchedule cosine_schedule(int steps, double s) {
  if (steps < 1) fail(ErrorCode::kInvalidInput, "schedule needs at least one step");
  if (!(s > 0.0)) fail(ErrorCode::kInvalidInput, "cosine offset s must be positive");
  auto f = [&](int t) {
    const double c = std::cos((static_cast<double>(t) / steps + s) / (1.0 + s) * std::numbers::pi / 2.0);
    return c * c;
  };
  NoiseSchedule sched;
  sched.steps = steps;
  sched.alpha_bar.assign(static_cast<std::size_t>(steps) + 1, 1.0);
  sched.betas.assign(static_cast<std::size_t>(steps) + 1, 0.0);
  const double f0 = f(0);
  double prev_raw = 1.0;
  for (int t = 1; t <= steps; ++t) {
    const double raw = f(t) / f0;
    const double beta = std::min(1.0 - raw / prev_raw, 0.999);
    prev_raw = raw;
    const auto i = static_cast<std::size_t>(t);
    sched.betas[i] = beta;
    sched.alpha_bar[i] = sched.alpha_bar[i - 1] * (1.0 - beta);
  }
  return sched;
}

std::vector<int> respaced_timesteps(int total_steps, int sample_steps) {
  if (sample_steps < 1 || sample_steps > total_steps) {
    fail(ErrorCode::kInvalidInput, "sample steps must lie in [1, " + std::to_string(total_steps) + "]");
  }
  std::vector<int> taus;
  taus.reserve(static_cast<std::size_t>(sample_steps) + 1);
  const long long big_t = total_steps;
  const long long big_s = sample_steps;
  for (long long k = 0; k <= big_s; ++k) {
    taus.push_back(static_cast<int>((2 * k * big_t + big_s) / (2 * big_s)));
  }
  return taus;
}

MatrixXd q_sample(const MatrixXd& x0, int t, const MatrixXd& eps, const NoiseSchedule& schedule) {
  if (x0.rows() != eps.rows() || x0.cols() != eps.cols()) {
    fail(ErrorCode::kShapeMismatch, "q_sample: x0 and noise shapes differ");
  }
  const double ab = schedule.alpha_bar_at(t);
  return std::sqrt(ab) * x0 + std::sqrt(1.0 - ab) * eps;
}

VectorXd oracle_gaussian_eps(const VectorXd& x_t, int t, const VectorXd& mu0, const VectorXd& sigma0,
                             const NoiseSchedule& schedule) {
  if (x_t.size() != mu0.size() || x_t.size() != sigma0.size()) {
    fail(ErrorCode::kShapeMismatch, "oracle: target and sample dimensions differ");
  }
  const double ab = schedule.alpha_bar_at(t);
  if (ab >= 1.0) return VectorXd::Zero(x_t.size());
  const double sa = std::sqrt(ab);
  VectorXd out(x_t.size());
  for (Eigen::Index i = 0; i < x_t.size(); ++i) {
    const double var0 = sigma0[i] * sigma0[i];
    const double gain = sa * var0 / (ab * var0 + 1.0 - ab);
    const double x0_hat = mu0[i] + gain * (x_t[i] - sa * mu0[i]);
    out[i] = (x_t[i] - sa * x0_hat) / std::sqrt(1.0 - ab);
  }
  return out;
}

GaussianOracleDenoiser::GaussianOracleDenoiser(VectorXd mean, VectorXd stddev, NoiseSchedule schedule)
    : mean_(std::move(mean)), stddev_(std::move(stddev)), schedule_(std::move(schedule)) {
  if (mean_.size() != stddev_.size()) {
    fail(ErrorCode::kShapeMismatch, "oracle mean and stddev sizes differ");
  }
}

MatrixXd GaussianOracleDenoiser::predict(const MatrixXd& x, int timestep, const MatrixXd&) const {
  if (x.cols() != mean_.size()) fail(ErrorCode::kShapeMismatch, "oracle: wrong sample dimension");
  MatrixXd out(x.rows(), x.cols());
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    out.row(r) = oracle_gaussian_eps(x.row(r).transpose(), timestep, mean_, stddev_, schedule_).transpose();
  }
  return out;
}

ConditionalGaussianOracle::ConditionalGaussianOracle(int dim, int cond_dim, TargetFn target,
                                                     NoiseSchedule schedule)
    : dim_(dim), cond_dim_(cond_dim), target_(std::move(target)), schedule_(std::move(schedule)) {}

MatrixXd ConditionalGaussianOracle::predict(const MatrixXd& x, int timestep, const MatrixXd& cond) const {
  if (x.cols() != dim_ || cond.rows() != x.rows() || cond.cols() != cond_dim_) {
    fail(ErrorCode::kShapeMismatch, "conditional oracle: wrong input shape");
  }
  MatrixXd out(x.rows(), x.cols());
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    const auto [mu, sigma] = target_(cond.row(r).transpose());
    out.row(r) = oracle_gaussian_eps(x.row(r).transpose(), timestep, mu, sigma, schedule_).transpose();
  }
  return out;
}

MatrixXd p_sample_step(const MatrixXd& x_t, const MatrixXd& eps_hat, int t, int t_prev,
                       const NoiseSchedule& schedule, const MatrixXd& noise) {
  const double ab = schedule.alpha_bar_at(t);
  const double ab_prev = schedule.alpha_bar_at(t_prev);
  const double alpha = ab / ab_prev;
  const double beta = 1.0 - alpha;
  MatrixXd mean = (x_t - (beta / std::sqrt(1.0 - ab)) * eps_hat) / std::sqrt(alpha);
  if (t_prev == 0) return mean;
  const double var = beta * (1.0 - ab_prev) / (1.0 - ab);
  return mean + std::sqrt(var) * noise;
}

MatrixXd p_sample_loop(const Denoiser& denoiser, const MatrixXd& cond, int rows,
                       const NoiseSchedule& schedule, int sample_steps, Rng& rng) {
  if (cond.rows() != rows || cond.cols() != denoiser.cond_dim()) {
    fail(ErrorCode::kShapeMismatch, "p_sample_loop: condition shape does not match");
  }
  const auto taus = respaced_timesteps(schedule.steps, sample_steps);
  const int dim = denoiser.dim();
  MatrixXd x(rows, dim);
  rng.fill_normal(std::span<double>(x.data(), static_cast<std::size_t>(x.size())));
  MatrixXd noise(rows, dim);
  for (std::size_t k = taus.size() - 1; k >= 1; --k) {
    const int t = taus[k];
    const int t_prev = taus[k - 1];
    const MatrixXd eps_hat = denoiser.predict(x, t, cond);
    if (t_prev > 0) rng.fill_normal(std::span<double>(noise.data(), static_cast<std::size_t>(noise.size())));
    x = p_sample_step(x, eps_hat, t, t_prev, schedule, noise);
  }
  return x;
}

std::size_t MlpParams::parameter_count() const {
  std::size_t n = 0;
  for (std::size_t l = 0; l < weights.size(); ++l) {
    n += static_cast<std::size_t>(weights[l].size() + biases[l].size());
  }
  return n;
}

VectorXd MlpParams::flatten() const {
  VectorXd flat(static_cast<Eigen::Index>(parameter_count()));
  Eigen::Index pos = 0;
  for (std::size_t l = 0; l < weights.size(); ++l) {
    flat.segment(pos, weights[l].size()) = weights[l].reshaped();
    pos += weights[l].size();
    flat.segment(pos, biases[l].size()) = biases[l];
    pos += biases[l].size();
  }
  return flat;
}

void MlpParams::assign(const VectorXd& flat) {
  if (static_cast<std::size_t>(flat.size()) != parameter_count()) {
    fail(ErrorCode::kShapeMismatch, "parameter vector has the wrong length");
  }
  Eigen::Index pos = 0;
  for (std::size_t l = 0; l < weights.size(); ++l) {
    weights[l].reshaped() = flat.segment(pos, weights[l].size());
    pos += weights[l].size();
    biases[l] = flat.segment(pos, biases[l].size());
    pos += biases[l].size();
  }
}

bool MlpParams::operator==(const MlpParams& other) const {
  if (weights.size() != other.weights.size()) return false;
  for (std::size_t l = 0; l < weights.size(); ++l) {
    if (weights[l].rows() != other.weights[l].rows() || weights[l].cols() != other.weights[l].cols() ||
        weights[l] != other.weights[l] || biases[l] != other.biases[l]) {
      return false;
    }
  }
  return true;
}

MatrixXd timestep_embedding(const std::vector<int>& timesteps, int dim) {
  const int half = dim / 2;
  MatrixXd emb = MatrixXd::Zero(static_cast<Eigen::Index>(timesteps.size()), dim);
  for (std::size_t r = 0; r < timesteps.size(); ++r) {
    for (int i = 0; i < half; ++i) {
      const double freq = std::exp(-std::log(10000.0) * i / half);
      const double arg = timesteps[r] * freq;
      emb(static_cast<Eigen::Index>(r), i) = std::sin(arg);
      emb(static_cast<Eigen::Index>(r), half + i) = std::cos(arg);
    }
  }
  return emb;
}

MlpParams init_mlp(const MlpSpec& spec, Rng& rng) {
  if (spec.data_dim < 1 || spec.cond_dim < 0 || spec.time_embed_dim < 0) {
    fail(ErrorCode::kInvalidInput, "invalid denoiser dimensions");
  }
  MlpParams p;
  int fan_in = spec.input_dim();
  std::vector<int> outs = spec.hidden;
  outs.push_back(spec.data_dim);
  for (int out : outs) {
    if (out < 1) fail(ErrorCode::kInvalidInput, "layer widths must be positive");
    MatrixXd w(out, fan_in);
    const double scale = 1.0 / std::sqrt(static_cast<double>(fan_in));
    for (Eigen::Index i = 0; i < w.size(); ++i) w.data()[i] = scale * rng.normal();
    p.weights.push_back(std::move(w));
    p.biases.push_back(VectorXd::Zero(out));
    fan_in = out;
  }
  return p;
}

namespace {

double act(Activation a, double z) {
  if (a == Activation::kTanh) return std::tanh(z);
  return z / (1.0 + std::exp(-z));
}

double act_grad(Activation a, double z) {
  if (a == Activation::kTanh) {
    const double t = std::tanh(z);
    return 1.0 - t * t;
  }
  const double s = 1.0 / (1.0 + std::exp(-z));
  return s + z * s * (1.0 - s);
}

MatrixXd assemble_input(const MlpSpec& spec, const MatrixXd& x_t, const std::vector<int>& timesteps,
                        const MatrixXd& cond) {
  const Eigen::Index n = x_t.rows();
  if (x_t.cols() != spec.data_dim || static_cast<Eigen::Index>(timesteps.size()) != n ||
      cond.rows() != n || cond.cols() != spec.cond_dim) {
    fail(ErrorCode::kShapeMismatch, "denoiser input shapes are inconsistent");
  }
  MatrixXd in(n, spec.input_dim());
  in.leftCols(spec.data_dim) = x_t;
  in.middleCols(spec.data_dim, spec.time_embed_dim) = timestep_embedding(timesteps, spec.time_embed_dim);
  in.rightCols(spec.cond_dim) = cond;
  return in;
}

struct ForwardTrace {
  std::vector<MatrixXd> inputs;  // a_l for each layer
  std::vector<MatrixXd> pre;     // z_l for hidden layers
  MatrixXd output;
};

ForwardTrace forward(const MlpSpec& spec, const MlpParams& params, MatrixXd input) {
  if (params.weights.size() != spec.hidden.size() + 1) {
    fail(ErrorCode::kShapeMismatch, "parameter layers do not match the declared widths");
  }
  ForwardTrace tr;
  MatrixXd a = std::move(input);
  const std::size_t layers = params.weights.size();
  for (std::size_t l = 0; l < layers; ++l) {
    if (params.weights[l].cols() != a.cols()) {
      fail(ErrorCode::kShapeMismatch, "layer " + std::to_string(l) + " input width mismatch");
    }
    MatrixXd z = a * params.weights[l].transpose();
    z.rowwise() += params.biases[l].transpose();
    tr.inputs.push_back(std::move(a));
    if (l + 1 == layers) {
      tr.output = std::move(z);
    } else {
      a = z.unaryExpr([&](double v) { return act(spec.activation, v); });
      tr.pre.push_back(std::move(z));
    }
  }
  return tr;
}

MatrixXd noised_inputs(const TrainingBatch& batch, const NoiseSchedule& schedule) {
  MatrixXd x_t(batch.x0.rows(), batch.x0.cols());
  for (Eigen::Index r = 0; r < batch.x0.rows(); ++r) {
    const double ab = schedule.alpha_bar_at(batch.timesteps[static_cast<std::size_t>(r)]);
    x_t.row(r) = std::sqrt(ab) * batch.x0.row(r) + std::sqrt(1.0 - ab) * batch.noise.row(r);
  }
  return x_t;
}

void check_batch(const TrainingBatch& batch) {
  if (batch.x0.rows() == 0) fail(ErrorCode::kInvalidInput, "empty training batch");
  if (batch.noise.rows() != batch.x0.rows() || batch.noise.cols() != batch.x0.cols() ||
      static_cast<Eigen::Index>(batch.timesteps.size()) != batch.x0.rows()) {
    fail(ErrorCode::kShapeMismatch, "training batch fields disagree in shape");
  }
}

}  // namespace

MatrixXd mlp_eps(const MlpSpec& spec, const MlpParams& params, const MatrixXd& x_t,
                 const std::vector<int>& timesteps, const MatrixXd& cond) {
  return forward(spec, params, assemble_input(spec, x_t, timesteps, cond)).output;
}

double mlp_loss(const MlpSpec& spec, const MlpParams& params, const TrainingBatch& batch,
                const NoiseSchedule& schedule) {
  check_batch(batch);
  const MatrixXd eps_hat = mlp_eps(spec, params, noised_inputs(batch, schedule), batch.timesteps, batch.cond);
  return (eps_hat - batch.noise).squaredNorm() / static_cast<double>(batch.noise.size());
}

LossAndGrad mlp_gradients(const MlpSpec& spec, const MlpParams& params, const TrainingBatch& batch,
                          const NoiseSchedule& schedule) {
  check_batch(batch);
  const MatrixXd x_t = noised_inputs(batch, schedule);
  ForwardTrace tr = forward(spec, params, assemble_input(spec, x_t, batch.timesteps, batch.cond));
  const MatrixXd diff = tr.output - batch.noise;
  const double count = static_cast<double>(diff.size());

  LossAndGrad out;
  out.loss = diff.squaredNorm() / count;
  out.grads.weights.resize(params.weights.size());
  out.grads.biases.resize(params.biases.size());

  MatrixXd dz = (2.0 / count) * diff;
  for (std::size_t l = params.weights.size(); l-- > 0;) {
    out.grads.weights[l] = dz.transpose() * tr.inputs[l];
    out.grads.biases[l] = dz.colwise().sum().transpose();
    if (l == 0) break;
    const MatrixXd da = dz * params.weights[l];
    const MatrixXd& z = tr.pre[l - 1];
    dz = da.cwiseProduct(z.unaryExpr([&](double v) { return act_grad(spec.activation, v); }));
  }
  return out;
}

MlpDenoiser::MlpDenoiser(MlpSpec spec, MlpParams params, int train_steps)
    : spec_(std::move(spec)), params_(std::move(params)), train_steps_(train_steps) {
  if (params_.weights.size() != spec_.hidden.size() + 1) {
    fail(ErrorCode::kShapeMismatch, "parameter layers do not match the declared widths");
  }
}

MatrixXd MlpDenoiser::predict(const MatrixXd& x, int timestep, const MatrixXd& cond) const {
  return mlp_eps(spec_, params_, x, std::vector<int>(static_cast<std::size_t>(x.rows()), timestep), cond);
}

MlpDenoiser TrainResult::denoiser() const {
  return MlpDenoiser(spec, ema, diffusion_steps);
}

namespace {

TrainingBatch draw_batch(const TrainingSet& data, const std::vector<std::size_t>& rows, int total_steps,
                         Rng& rng) {
  TrainingBatch b;
  const auto n = static_cast<Eigen::Index>(rows.size());
  b.x0.resize(n, data.x0.cols());
  b.cond.resize(n, data.cond.cols());
  b.timesteps.resize(rows.size());
  for (Eigen::Index r = 0; r < n; ++r) {
    const auto src = static_cast<Eigen::Index>(rows[static_cast<std::size_t>(r)]);
    b.x0.row(r) = data.x0.row(src);
    b.cond.row(r) = data.cond.row(src);
    b.timesteps[static_cast<std::size_t>(r)] = 1 + static_cast<int>(rng.index(static_cast<std::size_t>(total_steps)));
  }
  b.noise.resize(n, data.x0.cols());
  rng.fill_normal(std::span<double>(b.noise.data(), static_cast<std::size_t>(b.noise.size())));
  return b;
}

}  // namespace

TrainResult train_denoiser(const TrainingSet& data, const TrainConfig& cfg) {
  if (data.x0.rows() == 0) fail(ErrorCode::kInvalidInput, "training set is empty");
  if (data.cond.rows() != data.x0.rows()) {
    fail(ErrorCode::kShapeMismatch, "training conditions and samples differ in row count");
  }
  if (cfg.batch_size < 1 || cfg.iterations < 0 || cfg.ema_every < 1 || cfg.learning_rate < 0.0) {
    fail(ErrorCode::kInvalidInput, "invalid training configuration");
  }
  const NoiseSchedule schedule = cosine_schedule(cfg.diffusion_steps);

  TrainResult res;
  res.diffusion_steps = cfg.diffusion_steps;
  res.spec.data_dim = static_cast<int>(data.x0.cols());
  res.spec.cond_dim = static_cast<int>(data.cond.cols());
  res.spec.time_embed_dim = cfg.time_embed_dim;
  res.spec.hidden = cfg.hidden;
  res.spec.activation = cfg.activation;

  Rng rng(cfg.seed);
  res.raw = init_mlp(res.spec, rng);
  res.ema = res.raw;

  // Fixed evaluation batch drawn from its own stream.
  Rng eval_rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
  std::vector<std::size_t> eval_rows(static_cast<std::size_t>(cfg.eval_batch_size));
  for (auto& r : eval_rows) r = eval_rng.index(static_cast<std::size_t>(data.x0.rows()));
  const TrainingBatch eval_batch = draw_batch(data, eval_rows, cfg.diffusion_steps, eval_rng);

  std::vector<std::size_t> order(static_cast<std::size_t>(data.x0.rows()));
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  rng.shuffle(std::span<std::size_t>(order));
  std::size_t cursor = 0;

  VectorXd theta = res.raw.flatten();
  VectorXd ema = theta;
  VectorXd m = VectorXd::Zero(theta.size());
  VectorXd v = VectorXd::Zero(theta.size());

  res.log.push_back({0, 0.0, 0.0, mlp_loss(res.spec, res.raw, eval_batch, schedule)});

  MlpParams work = res.raw;
  for (int step = 1; step <= cfg.iterations; ++step) {
    std::vector<std::size_t> rows(static_cast<std::size_t>(cfg.batch_size));
    for (auto& r : rows) {
      if (cursor == order.size()) {
        rng.shuffle(std::span<std::size_t>(order));
        cursor = 0;
      }
      r = order[cursor++];
    }
    const TrainingBatch batch = draw_batch(data, rows, cfg.diffusion_steps, rng);
    work.assign(theta);
    const LossAndGrad lg = mlp_gradients(res.spec, work, batch, schedule);
    const VectorXd g = lg.grads.flatten();

    const double lr = cfg.warmup_steps > 0
                          ? cfg.learning_rate * std::min(1.0, static_cast<double>(step) / cfg.warmup_steps)
                          : cfg.learning_rate;
    m = cfg.beta1 * m + (1.0 - cfg.beta1) * g;
    v = cfg.beta2 * v + (1.0 - cfg.beta2) * g.cwiseProduct(g);
    const double c1 = 1.0 - std::pow(cfg.beta1, step);
    const double c2 = 1.0 - std::pow(cfg.beta2, step);
    for (Eigen::Index i = 0; i < theta.size(); ++i) {
      theta[i] -= lr * (m[i] / c1) / (std::sqrt(v[i] / c2) + cfg.adam_eps);
    }
    if (step % cfg.ema_every == 0) ema += (1.0 - cfg.ema_decay) * (theta - ema);

    if (step <= 10 || step % std::max(1, cfg.log_every) == 0 || step == cfg.iterations) {
      work.assign(theta);
      res.log.push_back({step, lr, lg.loss, mlp_loss(res.spec, work, eval_batch, schedule)});
    }
  }
  res.raw.assign(theta);
  res.ema.assign(ema);
  return res;
}

std::string_view activation_name(Activation a) { return a == Activation::kTanh ? "tanh" : "silu"; }

}  // namespace lidargen
