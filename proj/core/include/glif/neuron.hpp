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

#ifndef GLIF_NEURON_HPP
#define GLIF_NEURON_HPP

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>

#include "glif/linalg.hpp"

namespace glif {

// ---------------------------------------------------------------------------
// The gated leaky integrate-and-fire (GLIF) neuron.
//
// A discrete-time LIF neuron has three behaviors: membrane leakage,
// integration of synaptic current, and post-spike reset. Classic LIF
// variants pick one mechanism per behavior (exponential or linear decay,
// uniform or time-weighted input, hard or soft reset). GLIF blends both
// mechanisms of each behavior through three gating factors alpha, beta,
// gamma in (0,1):
//
//   L = [1 - alpha*(1 - tau_exp)] * U_prev - (1 - alpha) * tau_lin
//   I = [1 - beta*(1 - g_t)] * C
//   F = -gamma * L_exp - (1 - gamma) * V_re,   L_exp = [1-alpha(1-tau_exp)]*U_prev
//   U = L + I + F * S_prev
//   S = H(U - V_th)
//
// alpha -> 1 gives pure exponential decay, alpha -> 0 pure linear decay;
// beta -> 0 weights all time steps uniformly, beta -> 1 applies the
// per-step conductance g_t; gamma -> 1 hard-resets the exponential part of
// the potential, gamma -> 0 subtracts the fixed soft-reset amount V_re.
// The reset acts only on the exponential-decay-related part L_exp.
//
// Every membrane parameter is stored unconstrained ("raw") and mapped
// through a sigmoid into (0,1), so all of them are trainable by plain
// gradient descent.
// ---------------------------------------------------------------------------

// Sigmoid, guarded so the image stays strictly inside (0,1) even where
// exp() saturates in double precision.
inline double sigmoid(double x) {
  const double s = 1.0 / (1.0 + std::exp(-x));
  if (s <= 0.0) return std::numeric_limits<double>::min();
  if (s >= 1.0) return 1.0 - std::numeric_limits<double>::epsilon() / 2.0;
  return s;
}

// Inverse of sigmoid. p must lie strictly inside (0,1).
double logit(double p);

// d sigmoid/dx expressed through the already-resolved value s = sigmoid(x).
inline double sigmoid_grad_from_value(double s) { return s * (1.0 - s); }

// Unconstrained learnable parameters for one sharing group. raw_g holds one
// entry per time step.
struct RawParamSet {
  double raw_alpha = 0.0;
  double raw_beta = 0.0;
  double raw_gamma = 0.0;
  double raw_tau_lin = 0.0;
  double raw_tau_exp = 0.0;
  double raw_v_re = 0.0;
  double raw_v_th = 0.0;
  Vector raw_g;  // length T

  bool all_finite() const;
};

// Sigmoid-resolved parameters, every field strictly inside (0,1). A pure
// function of a RawParamSet; see resolve_params().
struct NeuronGroupConfig {
  double alpha = 0.5;
  double beta = 0.5;
  double gamma = 0.5;
  double tau_lin = 0.5;
  double tau_exp = 0.5;
  double v_re = 0.5;
  double v_th = 0.5;
  Vector g;  // length T
};

// Maps every raw field through the sigmoid. Throws InvalidParamError if any
// raw value is non-finite.
NeuronGroupConfig resolve_params(const RawParamSet& raw);

// How the spike nonlinearity is evaluated. Spiking is the real model;
// Relaxed replaces the Heaviside with clamp(x + 0.5, 0, 1), a continuous
// ramp whose exact derivative equals the rectangular surrogate, so finite
// differences can validate the backward pass.
enum class SpikeMode { Spiking, Relaxed };

enum class NeuronKind {
  Glif,             // learnable gates, learnable primitives
  SimplexFrozen,    // gates pinned to a binary triple, primitives learnable
  GlifStaticGates,  // gates stay at their initial values (GLIF_s)
  GlifFused,        // no gates; dual primitives stacked additively (GLIF_f)
  VanillaLif,       // U = tau*U_prev*(1-S_prev) + C
};

struct NeuronMode {
  NeuronKind kind = NeuronKind::Glif;
  // SimplexFrozen gate bits. The triple enumerates the eight simplex LIFs;
  // (1,0,1) is the vanilla LIF: exponential decay, uniform coding, hard
  // reset.
  bool alpha_bit = false;
  bool beta_bit = false;
  bool gamma_bit = false;

  static NeuronMode glif() { return {NeuronKind::Glif}; }
  static NeuronMode glif_static_gates() { return {NeuronKind::GlifStaticGates}; }
  static NeuronMode glif_fused() { return {NeuronKind::GlifFused}; }
  static NeuronMode vanilla() { return {NeuronKind::VanillaLif}; }
  static NeuronMode frozen(bool a, bool b, bool c) {
    return {NeuronKind::SimplexFrozen, a, b, c};
  }

  // "glif", "glif_s", "glif_f", "vanilla", or a binary triple like "101".
  static NeuronMode from_string(const std::string& name);
  std::string name() const;

  // Gates are updated by the optimizer only in full GLIF mode.
  bool gates_trainable() const { return kind == NeuronKind::Glif; }

  // Whether the forward pass reads gate values from the resolved config
  // (as opposed to pinned constants or no gates at all).
  bool gates_from_config() const {
    return kind == NeuronKind::Glif || kind == NeuronKind::GlifStaticGates;
  }

  bool operator==(const NeuronMode&) const = default;
};

// Effective gate values used by one step. For frozen modes these sit at the
// closed endpoints {0,1}, which the resolved config itself never reaches.
struct GateValues {
  double alpha = 0.5;
  double beta = 0.5;
  double gamma = 0.5;
};

GateValues effective_gates(const NeuronGroupConfig& cfg, const NeuronMode& mode);

// Membrane potential u and spike output s for one population. In spiking
// mode every s entry is 0 or 1; in relaxed mode s lies in [0,1].
struct LayerState {
  Vector u;
  Vector s;

  static LayerState zeros(std::size_t n) {
    return LayerState{Vector(n, 0.0), Vector(n, 0.0)};
  }
};

// Per-step cached values needed by the backward pass.
//   l_total    result of the leakage gate
//   l_exp_part [1 - alpha*(1 - tau_exp)] * U_prev
//   i_incr     gated synaptic increment
//   f_reset    reset contribution (applied scaled by S_prev)
struct StepIntermediates {
  Vector l_total;
  Vector l_exp_part;
  Vector i_incr;
  Vector f_reset;
};

struct StepResult {
  LayerState state;
  StepIntermediates inter;
};

// --- Gating units -----------------------------------------------------------

struct LeakResult {
  Vector l_total;
  Vector l_exp_part;
};

// Leakage gate: l_total = [1-a(1-tau_exp)]*u_prev - (1-a)*tau_lin, with the
// exponential part reported separately for the reset gate.
LeakResult gate_alpha(const Vector& u_prev, const NeuronGroupConfig& cfg);

// Integration gate: i = [1 - b*(1 - g_t)] * c. Throws std::out_of_range if
// t >= cfg.g.size().
Vector gate_beta(const Vector& c, std::size_t t, const NeuronGroupConfig& cfg);

// Reset gate: f = -g*l_exp_part - (1-g)*v_re.
Vector gate_gamma(const Vector& l_exp_part, const NeuronGroupConfig& cfg);

// --- Spike nonlinearity -----------------------------------------------------

// Spiking: H(u - v_th) with H(0) = 1, so a potential exactly at threshold
// fires. Relaxed: clamp((u - v_th) + 0.5, 0, 1).
Vector spike(const Vector& u, double v_th, SpikeMode mode);
double spike_scalar(double u, double v_th, SpikeMode mode);

// Rectangular pseudo-derivative of the Heaviside: 1 iff |x| <= 0.5 (closed
// boundary, same H(0)=1 convention). This is also the exact derivative of
// the relaxed spike everywhere except the two kinks at |x| = 0.5.
inline double surrogate_grad(double x) {
  return (x <= 0.5 && x >= -0.5) ? 1.0 : 0.0;
}

// --- Step functions ---------------------------------------------------------

// One GLIF update. Dispatches on mode: gated modes run the gating units
// with their effective gate values, GlifFused runs the stacked-primitives
// update, VanillaLif runs the classic update. Throws ShapeError on length
// mismatch.
StepResult glif_step(const LayerState& state, const Vector& c, std::size_t t,
                     const NeuronGroupConfig& cfg, const NeuronMode& mode,
                     SpikeMode spike_mode);

// Classic LIF reference step: U = tau*U_prev*(1-S_prev) + C, S = H(U - v_th).
LayerState vanilla_lif_step(const LayerState& state, const Vector& c,
                            double tau, double v_th);

// Gate-free variant (GLIF_f): L = tau_exp*U_prev - tau_lin, I = g_t*C,
// F = -tau_exp*U_prev - v_re.
StepResult glif_f_step(const LayerState& state, const Vector& c, std::size_t t,
                       const NeuronGroupConfig& cfg, SpikeMode spike_mode);

// Gated update with explicit gate values (any values in [0,1], including
// the closed endpoints). glif_step routes through this; the dynamics lab
// uses it directly for gate sweeps.
StepResult gated_step(const LayerState& state, const Vector& c, std::size_t t,
                      const NeuronGroupConfig& cfg, const GateValues& gates,
                      SpikeMode spike_mode);

// --- Scalar kernels ---------------------------------------------------------
// Single-unit update underlying all step functions above. The network loop
// calls these directly so channel-wise layers (one parameter set per unit)
// share one code path with the vector ops.

struct UnitStep {
  double l_total;
  double l_exp_part;
  double i_incr;
  double f_reset;
  double u;
  double s;
};

UnitStep gated_step_unit(double u_prev, double s_prev, double c, double g_t,
                         const NeuronGroupConfig& cfg, const GateValues& gates,
                         SpikeMode spike_mode);

UnitStep fused_step_unit(double u_prev, double s_prev, double c, double g_t,
                         const NeuronGroupConfig& cfg, SpikeMode spike_mode);

UnitStep vanilla_step_unit(double u_prev, double s_prev, double c, double tau,
                           double v_th, SpikeMode spike_mode);

// Dispatches on mode.kind. g_t must be cfg.g[t].
UnitStep step_unit(double u_prev, double s_prev, double c, double g_t,
                   const NeuronGroupConfig& cfg, const NeuronMode& mode,
                   SpikeMode spike_mode);

}  // namespace glif

#endif  // GLIF_NEURON_HPP
