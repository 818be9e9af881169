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

#include "glif/neuron.hpp"

#include <cmath>
#include <stdexcept>

#include "glif/error.hpp"

namespace glif {

double logit(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw InvalidParamError("logit: argument " + std::to_string(p) +
                            " outside (0,1)");
  }
  return std::log(p / (1.0 - p));
}

bool RawParamSet::all_finite() const {
  if (!std::isfinite(raw_alpha) || !std::isfinite(raw_beta) ||
      !std::isfinite(raw_gamma) || !std::isfinite(raw_tau_lin) ||
      !std::isfinite(raw_tau_exp) || !std::isfinite(raw_v_re) ||
      !std::isfinite(raw_v_th)) {
    return false;
  }
  for (double v : raw_g) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

NeuronGroupConfig resolve_params(const RawParamSet& raw) {
  if (!raw.all_finite()) {
    throw InvalidParamError("resolve_params: non-finite raw parameter");
  }
  NeuronGroupConfig cfg;
  cfg.alpha = sigmoid(raw.raw_alpha);
  cfg.beta = sigmoid(raw.raw_beta);
  cfg.gamma = sigmoid(raw.raw_gamma);
  cfg.tau_lin = sigmoid(raw.raw_tau_lin);
  cfg.tau_exp = sigmoid(raw.raw_tau_exp);
  cfg.v_re = sigmoid(raw.raw_v_re);
  cfg.v_th = sigmoid(raw.raw_v_th);
  cfg.g.resize(raw.raw_g.size());
  for (std::size_t t = 0; t < raw.raw_g.size(); ++t) {
    cfg.g[t] = sigmoid(raw.raw_g[t]);
  }
  return cfg;
}

NeuronMode NeuronMode::from_string(const std::string& name) {
  if (name == "glif") return glif();
  if (name == "glif_s") return glif_static_gates();
  if (name == "glif_f") return glif_fused();
  if (name == "vanilla") return vanilla();
  if (name.size() == 3 && (name[0] == '0' || name[0] == '1') &&
      (name[1] == '0' || name[1] == '1') &&
      (name[2] == '0' || name[2] == '1')) {
    return frozen(name[0] == '1', name[1] == '1', name[2] == '1');
  }
  throw InvalidParamError("unknown neuron mode '" + name +
                          "' (expected glif, glif_s, glif_f, vanilla, or a "
                          "binary triple like 101)");
}

std::string NeuronMode::name() const {
  switch (kind) {
    case NeuronKind::Glif:
      return "glif";
    case NeuronKind::GlifStaticGates:
      return "glif_s";
    case NeuronKind::GlifFused:
      return "glif_f";
    case NeuronKind::VanillaLif:
      return "vanilla";
    case NeuronKind::SimplexFrozen: {
      std::string s;
      s += alpha_bit ? '1' : '0';
      s += beta_bit ? '1' : '0';
      s += gamma_bit ? '1' : '0';
      return s;
    }
  }
  return "?";
}

GateValues effective_gates(const NeuronGroupConfig& cfg,
                           const NeuronMode& mode) {
  switch (mode.kind) {
    case NeuronKind::Glif:
    case NeuronKind::GlifStaticGates:
      return {cfg.alpha, cfg.beta, cfg.gamma};
    case NeuronKind::SimplexFrozen:
      return {mode.alpha_bit ? 1.0 : 0.0, mode.beta_bit ? 1.0 : 0.0,
              mode.gamma_bit ? 1.0 : 0.0};
    case NeuronKind::VanillaLif:
      return {1.0, 0.0, 1.0};
    case NeuronKind::GlifFused:
      break;  // no gates
  }
  throw InvalidParamError("effective_gates: mode has no gate values");
}

namespace {

void check_lengths(const LayerState& state, const Vector& c) {
  if (state.u.size() != state.s.size() || state.u.size() != c.size()) {
    throw ShapeError("neuron step: state/input length mismatch (u=" +
                     std::to_string(state.u.size()) +
                     ", s=" + std::to_string(state.s.size()) +
                     ", c=" + std::to_string(c.size()) + ")");
  }
}

double conductance_at(const NeuronGroupConfig& cfg, std::size_t t) {
  if (t >= cfg.g.size()) {
    throw std::out_of_range("time index " + std::to_string(t) +
                            " out of range for T=" +
                            std::to_string(cfg.g.size()));
  }
  return cfg.g[t];
}

}  // namespace

double spike_scalar(double u, double v_th, SpikeMode mode) {
  const double x = u - v_th;
  if (mode == SpikeMode::Spiking) {
    return x >= 0.0 ? 1.0 : 0.0;
  }
  const double y = x + 0.5;
  if (y <= 0.0) return 0.0;
  if (y >= 1.0) return 1.0;
  return y;
}

Vector spike(const Vector& u, double v_th, SpikeMode mode) {
  Vector s(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    s[i] = spike_scalar(u[i], v_th, mode);
  }
  return s;
}

LeakResult gate_alpha(const Vector& u_prev, const NeuronGroupConfig& cfg) {
  const double k = 1.0 - cfg.alpha * (1.0 - cfg.tau_exp);
  const double lin = (1.0 - cfg.alpha) * cfg.tau_lin;
  LeakResult out;
  out.l_total.resize(u_prev.size());
  out.l_exp_part.resize(u_prev.size());
  for (std::size_t i = 0; i < u_prev.size(); ++i) {
    out.l_exp_part[i] = k * u_prev[i];
    out.l_total[i] = out.l_exp_part[i] - lin;
  }
  return out;
}

Vector gate_beta(const Vector& c, std::size_t t, const NeuronGroupConfig& cfg) {
  const double w = 1.0 - cfg.beta * (1.0 - conductance_at(cfg, t));
  Vector i(c.size());
  for (std::size_t n = 0; n < c.size(); ++n) i[n] = w * c[n];
  return i;
}

Vector gate_gamma(const Vector& l_exp_part, const NeuronGroupConfig& cfg) {
  Vector f(l_exp_part.size());
  const double soft = (1.0 - cfg.gamma) * cfg.v_re;
  for (std::size_t i = 0; i < l_exp_part.size(); ++i) {
    f[i] = -cfg.gamma * l_exp_part[i] - soft;
  }
  return f;
}

UnitStep gated_step_unit(double u_prev, double s_prev, double c, double g_t,
                         const NeuronGroupConfig& cfg, const GateValues& gates,
                         SpikeMode spike_mode) {
  UnitStep r;
  const double k = 1.0 - gates.alpha * (1.0 - cfg.tau_exp);
  r.l_exp_part = k * u_prev;
  r.l_total = r.l_exp_part - (1.0 - gates.alpha) * cfg.tau_lin;
  r.i_incr = (1.0 - gates.beta * (1.0 - g_t)) * c;
  r.f_reset = -gates.gamma * r.l_exp_part - (1.0 - gates.gamma) * cfg.v_re;
  r.u = r.l_total + r.i_incr + r.f_reset * s_prev;
  r.s = spike_scalar(r.u, cfg.v_th, spike_mode);
  return r;
}

UnitStep fused_step_unit(double u_prev, double s_prev, double c, double g_t,
                         const NeuronGroupConfig& cfg, SpikeMode spike_mode) {
  UnitStep r;
  r.l_exp_part = cfg.tau_exp * u_prev;
  r.l_total = r.l_exp_part - cfg.tau_lin;
  r.i_incr = g_t * c;
  r.f_reset = -r.l_exp_part - cfg.v_re;
  r.u = r.l_total + r.i_incr + r.f_reset * s_prev;
  r.s = spike_scalar(r.u, cfg.v_th, spike_mode);
  return r;
}

UnitStep vanilla_step_unit(double u_prev, double s_prev, double c, double tau,
                           double v_th, SpikeMode spike_mode) {
  // Same intermediates decomposition as the gated step, so tapes stay
  // uniform: L = tau*U_prev, I = C, F = -tau*U_prev.
  UnitStep r;
  r.l_exp_part = tau * u_prev;
  r.l_total = r.l_exp_part;
  r.i_incr = c;
  r.f_reset = -r.l_exp_part;
  r.u = r.l_exp_part * (1.0 - s_prev) + c;
  r.s = spike_scalar(r.u, v_th, spike_mode);
  return r;
}

UnitStep step_unit(double u_prev, double s_prev, double c, double g_t,
                   const NeuronGroupConfig& cfg, const NeuronMode& mode,
                   SpikeMode spike_mode) {
  switch (mode.kind) {
    case NeuronKind::GlifFused:
      return fused_step_unit(u_prev, s_prev, c, g_t, cfg, spike_mode);
    case NeuronKind::VanillaLif:
      return vanilla_step_unit(u_prev, s_prev, c, cfg.tau_exp, cfg.v_th,
                               spike_mode);
    default:
      return gated_step_unit(u_prev, s_prev, c, g_t, cfg,
                             effective_gates(cfg, mode), spike_mode);
  }
}

namespace {

template <typename UnitFn>
StepResult run_step(const LayerState& state, const Vector& c, UnitFn&& fn) {
  check_lengths(state, c);
  const std::size_t n = c.size();
  StepResult out;
  out.inter.l_total.resize(n);
  out.inter.l_exp_part.resize(n);
  out.inter.i_incr.resize(n);
  out.inter.f_reset.resize(n);
  out.state.u.resize(n);
  out.state.s.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const UnitStep r = fn(state.u[i], state.s[i], c[i]);
    out.inter.l_total[i] = r.l_total;
    out.inter.l_exp_part[i] = r.l_exp_part;
    out.inter.i_incr[i] = r.i_incr;
    out.inter.f_reset[i] = r.f_reset;
    out.state.u[i] = r.u;
    out.state.s[i] = r.s;
  }
  return out;
}

}  // namespace

StepResult gated_step(const LayerState& state, const Vector& c, std::size_t t,
                      const NeuronGroupConfig& cfg, const GateValues& gates,
                      SpikeMode spike_mode) {
  const double g_t = conductance_at(cfg, t);
  return run_step(state, c, [&](double u, double s, double ci) {
    return gated_step_unit(u, s, ci, g_t, cfg, gates, spike_mode);
  });
}

StepResult glif_f_step(const LayerState& state, const Vector& c, std::size_t t,
                       const NeuronGroupConfig& cfg, SpikeMode spike_mode) {
  const double g_t = conductance_at(cfg, t);
  return run_step(state, c, [&](double u, double s, double ci) {
    return fused_step_unit(u, s, ci, g_t, cfg, spike_mode);
  });
}

LayerState vanilla_lif_step(const LayerState& state, const Vector& c,
                            double tau, double v_th) {
  check_lengths(state, c);
  LayerState out;
  out.u.resize(c.size());
  out.s.resize(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    out.u[i] = tau * state.u[i] * (1.0 - state.s[i]) + c[i];
    out.s[i] = spike_scalar(out.u[i], v_th, SpikeMode::Spiking);
  }
  return out;
}

StepResult glif_step(const LayerState& state, const Vector& c, std::size_t t,
                     const NeuronGroupConfig& cfg, const NeuronMode& mode,
                     SpikeMode spike_mode) {
  const double g_t = conductance_at(cfg, t);
  return run_step(state, c, [&](double u, double s, double ci) {
    return step_unit(u, s, ci, g_t, cfg, mode, spike_mode);
  });
}

}  // namespace glif
