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

#ifndef GLIF_BPTT_HPP
#define GLIF_BPTT_HPP

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "glif/network.hpp"

namespace glif {

// Gradients mirroring the learnable structure of a network: one weight
// matrix per layer and one RawParamSet-shaped record per parameter group
// holding the gradient with respect to each raw, pre-sigmoid value.
struct GradientSet {
  struct LayerGrads {
    Matrix weights;
    std::vector<RawParamSet> params;
  };
  std::vector<LayerGrads> layers;

  static GradientSet zeros_like(const NetworkSpec& net);

  void add(const GradientSet& other);
  void scale(double factor);
  double max_abs() const;
};

// Reverse-mode backpropagation through time over a forward tape.
//
// dS/dU uses the rectangular surrogate H(0.5 - |x|) in spiking mode; in
// relaxed mode the same window function is the exact derivative of the
// clipped-linear spike away from its two kinks. The reset term F * S_prev
// is part of the graph: gradients flow through S_prev using the surrogate
// at the earlier step, with no detaching.
//
// All other partials are exact derivatives of the step equations and the
// sigmoid reparameterization. Gradients of a shared group are summed over
// member units and time steps. Accumulation order is fixed (time
// descending, units ascending) so identical tapes give bit-identical
// gradients.
//
// loss_grad is d loss / d logits. Throws ShapeError if the tape does not
// match the network, NumericError if a non-finite gradient appears.
GradientSet backward(const NetworkSpec& net, const ForwardTape& tape,
                     const Vector& loss_grad, SpikeMode spike_mode);

// --- Parameter addressing ----------------------------------------------------

enum class ParamClass { SynapticWeight, Gate, Primitive, Conductance };

// Canonical order of the seven scalar raw fields:
// alpha, beta, gamma, tau_lin, tau_exp, v_re, v_th.
extern double RawParamSet::* const kRawFields[7];
extern const char* const kRawFieldNames[7];

// A scalar parameter slot inside a network.
struct ParamRef {
  std::size_t layer = 0;
  ParamClass cls = ParamClass::SynapticWeight;
  std::size_t group = 0;  // parameter group (unused for weights)
  std::size_t row = 0;    // weight row
  std::size_t col = 0;    // weight col, or time index for conductance
  int field = 0;          // index into kRawFields

  std::string describe() const;
};

// Visits every learnable scalar in a fixed order: layers ascending;
// weights row-major; then parameter groups ascending with the seven raw
// fields followed by g[0..T-1].
void visit_params(NetworkSpec& net,
                  const std::function<void(double&, const ParamRef&)>& fn);

double& param_at(NetworkSpec& net, const ParamRef& ref);
double grad_at(const GradientSet& grads, const ParamRef& ref);

// --- Finite-difference oracle -------------------------------------------------

// Mean softmax cross-entropy of the network over the given samples.
double dataset_loss(const NetworkSpec& net,
                    const std::vector<std::vector<Vector>>& inputs,
                    const std::vector<std::size_t>& labels,
                    SpikeMode spike_mode);

struct FdEstimate {
  ParamRef ref;
  double estimate = 0.0;
};

// Central difference (L(x+h) - L(x-h)) / (2h) of the relaxed-mode dataset
// loss for every parameter accepted by the selector (all when null). The
// network is restored bit-exactly afterwards. Throws InvalidParamError if
// step_h <= 0.
std::vector<FdEstimate> finite_difference_oracle(
    NetworkSpec& net, const std::vector<std::vector<Vector>>& inputs,
    const std::vector<std::size_t>& labels, double step_h,
    const std::function<bool(const ParamRef&)>& param_selector = nullptr);

// --- Gradient check ------------------------------------------------------------

// Relative error with the magnitude floored at 1: |a-n| / max(1, |a|, |n|).
double gradcheck_rel_err(double analytic, double numeric);

// Distance of the nominal tape from the nearest relaxed-spike kink:
// min over layers, steps, units of | |u - v_th| - 0.5 |. Finite
// differences are unreliable when this is tiny.
double min_kink_distance(const NetworkSpec& net, const ForwardTape& tape);

struct GradCheckEntry {
  ParamRef ref;
  double analytic = 0.0;
  double numeric = 0.0;
  double rel_err = 0.0;
};

struct GradCheckReport {
  double min_kink_distance = 0.0;
  double max_rel_err = 0.0;
  std::vector<GradCheckEntry> entries;
};

// Runs backward() and the finite-difference oracle side by side in relaxed
// mode and reports per-parameter errors. Tolerance policy is left to the
// caller.
GradCheckReport gradcheck(NetworkSpec& net,
                          const std::vector<std::vector<Vector>>& inputs,
                          const std::vector<std::size_t>& labels,
                          double step_h);

}  // namespace glif

#endif  // GLIF_BPTT_HPP
