// Copyright 2026 The Glifkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GLIF_TRAINER_HPP
#define GLIF_TRAINER_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "glif/bptt.hpp"
#include "glif/datasets.hpp"
#include "glif/network.hpp"
#include "glif/rng.hpp"

namespace glif {

struct TrainConfig {
  double lr0 = 0.1;
  double momentum = 0.9;
  double weight_decay = 5e-5;
  // Gating factors train at a fraction of the base learning rate.
  double gate_lr_scale = 0.1;
  std::size_t epochs = 200;
  std::size_t batch_size = 32;
  std::uint64_t seed = 0;
  // Cosine annealing period, in epochs. 0 means "use epochs".
  std::size_t t_max = 0;
  SpikeMode spike_mode = SpikeMode::Spiking;

  std::size_t effective_t_max() const { return t_max == 0 ? epochs : t_max; }
  void validate() const;
};

// Initialization constants for the membrane parameters: gates are drawn
// uniformly from [gate_lo, gate_hi) and primitives start at fixed values,
// all stored as logits so the resolved values match the targets.
struct InitTable {
  double v_th = 0.5;
  double v_re = 0.5;
  double g = 0.5;
  double tau_exp = 0.25;
  double tau_lin = 0.0625;
  double gate_lo = 0.4502;
  double gate_hi = 0.5498;

  void validate() const;
};

// Velocity buffers mirroring every learnable value, zero-initialized.
struct OptimizerState {
  GradientSet velocity;

  static OptimizerState zeros_like(const NetworkSpec& net) {
    return {GradientSet::zeros_like(net)};
  }
};

// One SGD-with-momentum update:
//   v <- momentum * v + g + wd * theta      (wd only for synaptic weights)
//   theta <- theta - lr * v                 (lr scaled for raw gates)
// Raw membrane parameters are never weight-decayed. Gates move only in
// full GLIF mode; in static/frozen/fused modes they are left untouched.
void sgd_step(NetworkSpec& net, const GradientSet& grads, OptimizerState& opt,
              double lr_now, const TrainConfig& cfg);

// lr(epoch) = 0.5 * lr0 * (1 + cos(pi * min(epoch, t_max) / t_max)).
double cosine_lr(std::size_t epoch, const TrainConfig& cfg);

// Seeds weights with a fan-in-scaled uniform draw, U(-1/sqrt(in_dim),
// 1/sqrt(in_dim)), and membrane parameters per the init table.
void init_params(NetworkSpec& net, const InitTable& init, Rng& rng);

struct EpochMetrics {
  std::size_t epoch = 0;
  double lr = 0.0;
  double train_loss = 0.0;
  double train_acc = 0.0;
  double eval_acc = 0.0;
};

struct TrainResult {
  std::vector<EpochMetrics> history;
};

// Mean classification accuracy over a dataset (tapeless forward).
double evaluate_accuracy(const NetworkSpec& net, const LabeledSpikeDataset& ds,
                         SpikeMode spike_mode);

// Full epoch loop: seeded shuffling, mini-batch BPTT, SGD updates, and
// per-epoch train/eval metrics. Deterministic given the seed (single
// threaded). Throws NumericError with the epoch/batch location if the loss
// diverges.
TrainResult train(NetworkSpec& net, const SplitDataset& data,
                  const TrainConfig& cfg);

// Metrics CSV: header `epoch,lr,train_loss,train_acc,eval_acc`.
void save_metrics_csv(const std::vector<EpochMetrics>& history,
                      const std::filesystem::path& path);

}  // namespace glif

#endif  // GLIF_TRAINER_HPP
