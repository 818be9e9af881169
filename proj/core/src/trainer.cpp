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

#include "glif/trainer.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>

#include "glif/error.hpp"
#include "glif/loss.hpp"

namespace glif {

void TrainConfig::validate() const {
  if (lr0 < 0.0 || !std::isfinite(lr0)) {
    throw InvalidParamError("TrainConfig: lr0 must be >= 0");
  }
  if (momentum < 0.0 || momentum >= 1.0) {
    throw InvalidParamError("TrainConfig: momentum must be in [0,1)");
  }
  if (weight_decay < 0.0) {
    throw InvalidParamError("TrainConfig: weight_decay must be >= 0");
  }
  if (gate_lr_scale <= 0.0) {
    throw InvalidParamError("TrainConfig: gate_lr_scale must be > 0");
  }
  if (epochs == 0 || batch_size == 0) {
    throw InvalidParamError("TrainConfig: epochs and batch_size must be > 0");
  }
}

void InitTable::validate() const {
  for (double v : {v_th, v_re, g, tau_exp, tau_lin, gate_lo, gate_hi}) {
    if (!(v > 0.0 && v < 1.0)) {
      throw InvalidParamError("InitTable: constants must lie in (0,1)");
    }
  }
  if (gate_lo >= gate_hi) {
    throw InvalidParamError("InitTable: gate_lo must be < gate_hi");
  }
}

void sgd_step(NetworkSpec& net, const GradientSet& grads, OptimizerState& opt,
              double lr_now, const TrainConfig& cfg) {
  if (grads.layers.size() != net.layers.size()) {
    throw ShapeError("sgd_step: gradient/network layer count mismatch");
  }
  for (std::size_t l = 0; l < net.layers.size(); ++l) {
    LayerSpec& layer = net.layers[l];
    const GradientSet::LayerGrads& g = grads.layers[l];
    GradientSet::LayerGrads& v = opt.velocity.layers[l];
    if (!g.weights.same_shape(layer.weights) ||
        g.params.size() != layer.params.size()) {
      throw ShapeError("sgd_step: shape mismatch at layer " +
                       std::to_string(l));
    }

    for (std::size_t i = 0; i < layer.weights.data.size(); ++i) {
      double& vel = v.weights.data[i];
      vel = cfg.momentum * vel + g.weights.data[i] +
            cfg.weight_decay * layer.weights.data[i];
      layer.weights.data[i] -= lr_now * vel;
    }

    const bool gates_move = layer.mode.gates_trainable();
    for (std::size_t p = 0; p < layer.params.size(); ++p) {
      RawParamSet& theta = layer.params[p];
      const RawParamSet& gp = g.params[p];
      RawParamSet& vel = v.params[p];
      for (int f = 0; f < 7; ++f) {
        const bool is_gate = f < 3;
        if (is_gate && !gates_move) continue;
        double& vf = vel.*kRawFields[f];
        vf = cfg.momentum * vf + gp.*kRawFields[f];  // no decay on membrane params
        const double lr = is_gate ? lr_now * cfg.gate_lr_scale : lr_now;
        theta.*kRawFields[f] -= lr * vf;
      }
      for (std::size_t t = 0; t < theta.raw_g.size(); ++t) {
        double& vf = vel.raw_g[t];
        vf = cfg.momentum * vf + gp.raw_g[t];
        theta.raw_g[t] -= lr_now * vf;
      }
    }
  }
}

double cosine_lr(std::size_t epoch, const TrainConfig& cfg) {
  const double t_max = static_cast<double>(cfg.effective_t_max());
  const double e = static_cast<double>(std::min(epoch, cfg.effective_t_max()));
  return 0.5 * cfg.lr0 * (1.0 + std::cos(std::numbers::pi * e / t_max));
}

void init_params(NetworkSpec& net, const InitTable& init, Rng& rng) {
  init.validate();
  // Draw slightly inside [gate_lo, gate_hi) so sigmoid(logit(p)) stays in
  // the half-open interval after round-trip rounding.
  const double margin = 1e-9 * (init.gate_hi - init.gate_lo);
  const double lo = init.gate_lo + margin;
  const double hi = init.gate_hi - margin;

  for (LayerSpec& layer : net.layers) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(layer.in_dim));
    for (double& w : layer.weights.data) w = rng.uniform(-bound, bound);
    for (RawParamSet& p : layer.params) {
      p.raw_alpha = logit(rng.uniform(lo, hi));
      p.raw_beta = logit(rng.uniform(lo, hi));
      p.raw_gamma = logit(rng.uniform(lo, hi));
      p.raw_tau_lin = logit(init.tau_lin);
      p.raw_tau_exp = logit(init.tau_exp);
      p.raw_v_re = logit(init.v_re);
      p.raw_v_th = logit(init.v_th);
      for (double& g : p.raw_g) g = logit(init.g);
    }
  }
}

double evaluate_accuracy(const NetworkSpec& net, const LabeledSpikeDataset& ds,
                         SpikeMode spike_mode) {
  if (ds.samples.empty()) {
    throw InvalidParamError("evaluate_accuracy: empty dataset");
  }
  std::size_t correct = 0;
  for (const LabeledSample& s : ds.samples) {
    const Vector logits = forward_logits(net, s.input, spike_mode);
    if (argmax(logits) == s.label) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(ds.samples.size());
}

TrainResult train(NetworkSpec& net, const SplitDataset& data,
                  const TrainConfig& cfg) {
  cfg.validate();
  net.validate();
  data.train.validate();
  data.eval.validate();
  if (data.train.samples.empty()) {
    throw InvalidParamError("train: empty training set");
  }

  OptimizerState opt = OptimizerState::zeros_like(net);
  TrainResult result;
  result.history.reserve(cfg.epochs);
  const std::size_t n = data.train.samples.size();

  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    const double lr = cosine_lr(epoch, cfg);
    const std::vector<std::size_t> order =
        shuffled_indices(n, cfg.seed, epoch);

    double loss_sum = 0.0;
    std::size_t correct = 0;
    for (std::size_t start = 0; start < n; start += cfg.batch_size) {
      const std::size_t end = std::min(start + cfg.batch_size, n);
      const double inv_batch = 1.0 / static_cast<double>(end - start);

      GradientSet grads = GradientSet::zeros_like(net);
      double batch_loss = 0.0;
      for (std::size_t j = start; j < end; ++j) {
        const LabeledSample& sample = data.train.samples[order[j]];
        const ForwardTape tape = forward(net, sample.input, cfg.spike_mode);
        batch_loss += softmax_cross_entropy(tape.logits, sample.label);
        if (argmax(tape.logits) == sample.label) ++correct;
        Vector lg = softmax_cross_entropy_grad(tape.logits, sample.label);
        for (double& v : lg) v *= inv_batch;
        grads.add(backward(net, tape, lg, cfg.spike_mode));
      }
      if (!std::isfinite(batch_loss)) {
        throw NumericError("training diverged (non-finite loss) at epoch " +
                           std::to_string(epoch) + ", batch " +
                           std::to_string(start / cfg.batch_size));
      }
      loss_sum += batch_loss;
      sgd_step(net, grads, opt, lr, cfg);
    }

    EpochMetrics m;
    m.epoch = epoch;
    m.lr = lr;
    m.train_loss = loss_sum / static_cast<double>(n);
    m.train_acc = static_cast<double>(correct) / static_cast<double>(n);
    m.eval_acc = data.eval.samples.empty()
                     ? 0.0
                     : evaluate_accuracy(net, data.eval, cfg.spike_mode);
    result.history.push_back(m);
  }
  return result;
}

void save_metrics_csv(const std::vector<EpochMetrics>& history,
                      const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw ParseError("cannot open metrics file for writing: " + path.string());
  }
  out << "epoch,lr,train_loss,train_acc,eval_acc\n";
  char buf[160];
  for (const EpochMetrics& m : history) {
    std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g,%.17g,%.17g\n", m.epoch,
                  m.lr, m.train_loss, m.train_acc, m.eval_acc);
    out << buf;
  }
  if (!out.good()) throw ParseError("failed writing metrics: " + path.string());
}

}  // namespace glif
