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

#ifndef GLIF_DYNAMICS_HPP
#define GLIF_DYNAMICS_HPP

#include <cstddef>
#include <filesystem>
#include <vector>

#include "glif/network.hpp"
#include "glif/neuron.hpp"

namespace glif {

// Input program for a single-neuron trace: a constant current, an explicit
// per-step current sequence, or silence.
struct InputProgram {
  enum class Kind { Constant, Sequence, Silence };
  Kind kind = Kind::Constant;
  double constant = 0.0;
  Vector sequence;  // used when kind == Sequence

  static InputProgram constant_current(double c) {
    return {Kind::Constant, c, {}};
  }
  static InputProgram silence() { return {Kind::Silence, 0.0, {}}; }
  static InputProgram from_sequence(Vector seq) {
    return {Kind::Sequence, 0.0, std::move(seq)};
  }
  double at(std::size_t t) const {
    switch (kind) {
      case Kind::Constant: return constant;
      case Kind::Sequence: return sequence.at(t);
      default: return 0.0;
    }
  }
};

// Optional constraint replacing the free conductance table with a cosine
// oscillation; beta then controls how strongly the oscillation modulates
// integration.
enum class ConductanceConstraint { Free, Cosine };

// Cosine conductance convention used by the lab:
// g(t) = 0.05 + 0.9 * 0.5 * (1 + cos(2*pi*t / T)), kept inside (0,1).
double cosine_conductance(std::size_t t, std::size_t time_steps);

// Single-group trace setup. Gate values are explicit here (closed interval
// [0,1] allowed) so sweeps can hit the pure-mechanism endpoints exactly.
struct TraceSpec {
  GateValues gates{0.5, 0.5, 0.5};
  double tau_lin = 0.0625;
  double tau_exp = 0.25;
  double v_re = 0.5;
  double v_th = 0.5;
  Vector g;  // free conductance table; resized/overridden per constraint
  std::size_t time_steps = 8;
  InputProgram input;
  ConductanceConstraint g_constraint = ConductanceConstraint::Free;
  SpikeMode spike_mode = SpikeMode::Spiking;
  double u0 = 0.0;
  double s0 = 0.0;

  void validate() const;
};

// Per-step record of one simulated neuron.
struct TraceRecord {
  Vector u, s, l, i, f, g_effective;

  std::size_t size() const { return u.size(); }
};

// Exact iterate of the gated step over the input program.
TraceRecord simulate_trace(const TraceSpec& spec);

// Fixed point c / (1 - tau_exp) of the pure-exponential-decay regime
// (alpha=1, beta=0, no spikes); traces converge to it geometrically with
// ratio tau_exp.
double saturation_point(const NeuronGroupConfig& cfg, double c);
double saturation_point(const TraceSpec& spec, double c);

// Trace CSV with columns `t,U,S,L,I,F,g`.
void export_trace_csv(const TraceRecord& record,
                      const std::filesystem::path& path);

// Per-layer, per-parameter histograms of the resolved (0,1) membrane
// parameters with fixed bin edges over (0,1). CSV columns:
// `layer,param,bin_index,bin_lo,bin_hi,count`.
void export_param_histograms(const NetworkSpec& net,
                             const std::filesystem::path& path,
                             std::size_t bins = 40);

}  // namespace glif

#endif  // GLIF_DYNAMICS_HPP
