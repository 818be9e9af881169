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

#include "glif/bptt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "glif/error.hpp"
#include "glif/loss.hpp"

namespace glif {

double RawParamSet::* const kRawFields[7] = {
    &RawParamSet::raw_alpha,   &RawParamSet::raw_beta,
    &RawParamSet::raw_gamma,   &RawParamSet::raw_tau_lin,
    &RawParamSet::raw_tau_exp, &RawParamSet::raw_v_re,
    &RawParamSet::raw_v_th};

const char* const kRawFieldNames[7] = {"alpha",   "beta", "gamma", "tau_lin",
                                       "tau_exp", "v_re", "v_th"};

GradientSet GradientSet::zeros_like(const NetworkSpec& net) {
  GradientSet g;
  g.layers.resize(net.layers.size());
  for (std::size_t l = 0; l < net.layers.size(); ++l) {
    const LayerSpec& layer = net.layers[l];
    g.layers[l].weights = Matrix(layer.out_dim, layer.in_dim, 0.0);
    g.layers[l].params.resize(layer.params.size());
    for (RawParamSet& p : g.layers[l].params) {
      p.raw_g.assign(net.time_steps, 0.0);
    }
  }
  return g;
}

void GradientSet::add(const GradientSet& other) {
  if (layers.size() != other.layers.size()) {
    throw ShapeError("GradientSet::add: layer count mismatch");
  }
  for (std::size_t l = 0; l < layers.size(); ++l) {
    LayerGrads& a = layers[l];
    const LayerGrads& b = other.layers[l];
    if (!a.weights.same_shape(b.weights) ||
        a.params.size() != b.params.size()) {
      throw ShapeError("GradientSet::add: shape mismatch at layer " +
                       std::to_string(l));
    }
    for (std::size_t i = 0; i < a.weights.data.size(); ++i) {
      a.weights.data[i] += b.weights.data[i];
    }
    for (std::size_t p = 0; p < a.params.size(); ++p) {
      for (double RawParamSet::* f : kRawFields) {
        a.params[p].*f += b.params[p].*f;
      }
      for (std::size_t t = 0; t < a.params[p].raw_g.size(); ++t) {
        a.params[p].raw_g[t] += b.params[p].raw_g[t];
      }
    }
  }
}

void GradientSet::scale(double factor) {
  for (LayerGrads& l : layers) {
    for (double& w : l.weights.data) w *= factor;
    for (RawParamSet& p : l.params) {
      for (double RawParamSet::* f : kRawFields) p.*f *= factor;
      for (double& g : p.raw_g) g *= factor;
    }
  }
}

double GradientSet::max_abs() const {
  double m = 0.0;
  for (const LayerGrads& l : layers) {
    for (double w : l.weights.data) m = std::max(m, std::abs(w));
    for (const RawParamSet& p : l.params) {
      for (double RawParamSet::* f : kRawFields) {
        m = std::max(m, std::abs(p.*f));
      }
      for (double g : p.raw_g) m = std::max(m, std::abs(g));
    }
  }
  return m;
}

namespace {

// Value-space gradient accumulators for one parameter group (derivatives
// with respect to the resolved, post-sigmoid values).
struct ValueGrads {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  double tau_lin = 0.0;
  double tau_exp = 0.0;
  double v_re = 0.0;
  double v_th = 0.0;
  Vector g;
};

void check_tape(const NetworkSpec& net, const ForwardTape& tape,
                const Vector& loss_grad) {
  if (tape.layer_count() != net.layers.size() ||
      tape.step_count() != net.time_steps) {
    throw ShapeError("backward: tape does not match network structure");
  }
  if (loss_grad.size() != net.out_dim()) {
    throw ShapeError("backward: loss gradient length " +
                     std::to_string(loss_grad.size()) +
                     " != network out_dim " + std::to_string(net.out_dim()));
  }
  for (std::size_t l = 0; l < net.layers.size(); ++l) {
    for (std::size_t t = 0; t < net.time_steps; ++t) {
      const TapeEntry& e = tape.entries[l][t];
      if (e.state.u.size() != net.layers[l].out_dim ||
          e.s_in.size() != net.layers[l].in_dim) {
        throw ShapeError("backward: tape entry shape mismatch at layer " +
                         std::to_string(l) + ", t=" + std::to_string(t));
      }
    }
  }
}

}  // namespace

GradientSet backward(const NetworkSpec& net, const ForwardTape& tape,
                     const Vector& loss_grad, SpikeMode /*spike_mode*/) {
  // The spike derivative is the same window function in both modes (it is
  // the exact relaxed derivative away from the kinks), so the mode does not
  // change the arithmetic below.
  net.validate();
  check_tape(net, tape, loss_grad);
  const auto resolved = resolve_network(net);

  const std::size_t num_layers = net.layers.size();
  const std::size_t steps = net.time_steps;
  GradientSet grads = GradientSet::zeros_like(net);

  // Readout: logits = mean over t of final-layer spikes.
  const double readout_scale = 1.0 / static_cast<double>(steps);

  // d loss / d s for the layer currently being processed, per time step;
  // starts as the readout contribution and becomes W^T * gc of the layer
  // above as we walk down.
  std::vector<Vector> gs_ext(steps);
  for (std::size_t t = 0; t < steps; ++t) {
    gs_ext[t].resize(net.out_dim());
    for (std::size_t i = 0; i < net.out_dim(); ++i) {
      gs_ext[t][i] = loss_grad[i] * readout_scale;
    }
  }

  for (std::size_t li = num_layers; li-- > 0;) {
    const LayerSpec& layer = net.layers[li];
    const std::size_t n = layer.out_dim;
    const bool fused = layer.mode.kind == NeuronKind::GlifFused;

    std::vector<ValueGrads> vg(layer.params.size());
    for (ValueGrads& v : vg) v.g.assign(steps, 0.0);

    std::vector<Vector> gs_below;
    if (li > 0) gs_below.assign(steps, Vector(net.layers[li - 1].out_dim, 0.0));

    Vector gu_next(n, 0.0);  // d loss / d u at step t+1
    Vector gc(n, 0.0);
    const Vector initial_state(n, 0.0);  // U^0 = S^0 = 0

    for (std::size_t t = steps; t-- > 0;) {
      const TapeEntry& e = tape.entries[li][t];
      const TapeEntry* e_next = t + 1 < steps ? &tape.entries[li][t + 1] : nullptr;
      const Vector& u_prev =
          t > 0 ? tape.entries[li][t - 1].state.u : initial_state;
      const Vector& s_prev =
          t > 0 ? tape.entries[li][t - 1].state.s : initial_state;

      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t gi = layer.group_of(i);
        const NeuronGroupConfig& cfg = resolved[li][gi];
        ValueGrads& acc = vg[gi];
        const double g_t = cfg.g[t];

        // Total adjoint of this unit's spike: readout / next layer, plus
        // the reset path into u at t+1.
        double gs = gs_ext[t][i];
        if (e_next != nullptr) {
          gs += gu_next[i] * e_next->inter.f_reset[i];
        }

        const double x = e.state.u[i] - cfg.v_th;
        const double sg = surrogate_grad(x);

        // Adjoint of the membrane potential: through this step's spike and
        // through the leak/reset carry into u at t+1.
        double gu = gs * sg;
        if (e_next != nullptr) {
          if (fused) {
            gu += gu_next[i] * cfg.tau_exp * (1.0 - e.state.s[i]);
          } else {
            const GateValues gv = effective_gates(cfg, layer.mode);
            const double k = 1.0 - gv.alpha * (1.0 - cfg.tau_exp);
            gu += gu_next[i] * k * (1.0 - gv.gamma * e.state.s[i]);
          }
        }

        if (fused) {
          acc.tau_exp += gu * u_prev[i] * (1.0 - s_prev[i]);
          acc.tau_lin += -gu;
          acc.g[t] += gu * e.c[i];
          acc.v_re += -gu * s_prev[i];
          acc.v_th += -gs * sg;
          gc[i] = gu * g_t;
        } else {
          const GateValues gv = effective_gates(cfg, layer.mode);
          const double one_minus_gs_prev = 1.0 - gv.gamma * s_prev[i];
          acc.alpha += gu * (-(1.0 - cfg.tau_exp) * u_prev[i] * one_minus_gs_prev +
                             cfg.tau_lin);
          acc.tau_exp += gu * gv.alpha * u_prev[i] * one_minus_gs_prev;
          acc.tau_lin += -gu * (1.0 - gv.alpha);
          acc.beta += -gu * (1.0 - g_t) * e.c[i];
          acc.g[t] += gu * gv.beta * e.c[i];
          acc.gamma += gu * s_prev[i] * (cfg.v_re - e.inter.l_exp_part[i]);
          acc.v_re += -gu * (1.0 - gv.gamma) * s_prev[i];
          acc.v_th += -gs * sg;
          gc[i] = gu * (1.0 - gv.beta * (1.0 - g_t));
        }

        gu_next[i] = gu;
      }

      add_outer(grads.layers[li].weights, gc, e.s_in);
      if (li > 0) gs_below[t] = matvec_transposed(layer.weights, gc);
    }

    // Chain through the sigmoid into raw space. Gates are driven by their
    // raw values only when the mode reads them from the config; in frozen,
    // fused, and vanilla modes the effective gates are constants and the
    // raw-gate gradients are exactly zero.
    const bool gates_live = layer.mode.gates_from_config();
    for (std::size_t gi = 0; gi < layer.params.size(); ++gi) {
      const NeuronGroupConfig& cfg = resolved[li][gi];
      RawParamSet& out = grads.layers[li].params[gi];
      const ValueGrads& acc = vg[gi];
      if (gates_live) {
        out.raw_alpha = acc.alpha * sigmoid_grad_from_value(cfg.alpha);
        out.raw_beta = acc.beta * sigmoid_grad_from_value(cfg.beta);
        out.raw_gamma = acc.gamma * sigmoid_grad_from_value(cfg.gamma);
      }
      out.raw_tau_lin = acc.tau_lin * sigmoid_grad_from_value(cfg.tau_lin);
      out.raw_tau_exp = acc.tau_exp * sigmoid_grad_from_value(cfg.tau_exp);
      out.raw_v_re = acc.v_re * sigmoid_grad_from_value(cfg.v_re);
      out.raw_v_th = acc.v_th * sigmoid_grad_from_value(cfg.v_th);
      for (std::size_t t = 0; t < steps; ++t) {
        out.raw_g[t] = acc.g[t] * sigmoid_grad_from_value(cfg.g[t]);
      }
      if (!out.all_finite()) {
        throw NumericError("non-finite parameter gradient at layer " +
                           std::to_string(li) + ", group " +
                           std::to_string(gi));
      }
    }
    for (double w : grads.layers[li].weights.data) {
      if (!std::isfinite(w)) {
        throw NumericError("non-finite weight gradient at layer " +
                           std::to_string(li));
      }
    }

    if (li > 0) gs_ext = std::move(gs_below);
  }

  return grads;
}

// --- Parameter addressing ----------------------------------------------------

std::string ParamRef::describe() const {
  switch (cls) {
    case ParamClass::SynapticWeight:
      return "layer" + std::to_string(layer) + ".w[" + std::to_string(row) +
             "," + std::to_string(col) + "]";
    case ParamClass::Conductance:
      return "layer" + std::to_string(layer) + ".group" +
             std::to_string(group) + ".g[" + std::to_string(col) + "]";
    default:
      return "layer" + std::to_string(layer) + ".group" +
             std::to_string(group) + "." + kRawFieldNames[field];
  }
}

void visit_params(NetworkSpec& net,
                  const std::function<void(double&, const ParamRef&)>& fn) {
  for (std::size_t l = 0; l < net.layers.size(); ++l) {
    LayerSpec& layer = net.layers[l];
    ParamRef ref;
    ref.layer = l;
    ref.cls = ParamClass::SynapticWeight;
    for (std::size_t r = 0; r < layer.weights.rows; ++r) {
      for (std::size_t c = 0; c < layer.weights.cols; ++c) {
        ref.row = r;
        ref.col = c;
        fn(layer.weights(r, c), ref);
      }
    }
    for (std::size_t g = 0; g < layer.params.size(); ++g) {
      RawParamSet& p = layer.params[g];
      ref.group = g;
      ref.row = ref.col = 0;
      for (int f = 0; f < 7; ++f) {
        ref.cls = f < 3 ? ParamClass::Gate : ParamClass::Primitive;
        ref.field = f;
        fn(p.*kRawFields[f], ref);
      }
      ref.cls = ParamClass::Conductance;
      ref.field = 0;
      for (std::size_t t = 0; t < p.raw_g.size(); ++t) {
        ref.col = t;
        fn(p.raw_g[t], ref);
      }
    }
  }
}

double& param_at(NetworkSpec& net, const ParamRef& ref) {
  LayerSpec& layer = net.layers.at(ref.layer);
  switch (ref.cls) {
    case ParamClass::SynapticWeight:
      return layer.weights(ref.row, ref.col);
    case ParamClass::Conductance:
      return layer.params.at(ref.group).raw_g.at(ref.col);
    default:
      return layer.params.at(ref.group).*kRawFields[ref.field];
  }
}

double grad_at(const GradientSet& grads, const ParamRef& ref) {
  const GradientSet::LayerGrads& layer = grads.layers.at(ref.layer);
  switch (ref.cls) {
    case ParamClass::SynapticWeight:
      return layer.weights(ref.row, ref.col);
    case ParamClass::Conductance:
      return layer.params.at(ref.group).raw_g.at(ref.col);
    default:
      return layer.params.at(ref.group).*kRawFields[ref.field];
  }
}

// --- Finite-difference oracle -------------------------------------------------

double dataset_loss(const NetworkSpec& net,
                    const std::vector<std::vector<Vector>>& inputs,
                    const std::vector<std::size_t>& labels,
                    SpikeMode spike_mode) {
  if (inputs.empty() || inputs.size() != labels.size()) {
    throw ShapeError("dataset_loss: inputs/labels mismatch");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    const Vector logits = forward_logits(net, inputs[i], spike_mode);
    total += softmax_cross_entropy(logits, labels[i]);
  }
  return total / static_cast<double>(inputs.size());
}

std::vector<FdEstimate> finite_difference_oracle(
    NetworkSpec& net, const std::vector<std::vector<Vector>>& inputs,
    const std::vector<std::size_t>& labels, double step_h,
    const std::function<bool(const ParamRef&)>& param_selector) {
  if (!(step_h > 0.0)) {
    throw InvalidParamError("finite_difference_oracle: step_h must be > 0");
  }
  std::vector<FdEstimate> out;
  std::vector<ParamRef> refs;
  visit_params(net, [&](double&, const ParamRef& ref) {
    if (!param_selector || param_selector(ref)) refs.push_back(ref);
  });
  out.reserve(refs.size());
  for (const ParamRef& ref : refs) {
    double& theta = param_at(net, ref);
    const double saved = theta;
    theta = saved + step_h;
    const double up = dataset_loss(net, inputs, labels, SpikeMode::Relaxed);
    theta = saved - step_h;
    const double down = dataset_loss(net, inputs, labels, SpikeMode::Relaxed);
    theta = saved;
    out.push_back({ref, (up - down) / (2.0 * step_h)});
  }
  return out;
}

double gradcheck_rel_err(double analytic, double numeric) {
  const double denom =
      std::max({1.0, std::abs(analytic), std::abs(numeric)});
  return std::abs(analytic - numeric) / denom;
}

double min_kink_distance(const NetworkSpec& net, const ForwardTape& tape) {
  const auto resolved = resolve_network(net);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t l = 0; l < tape.layer_count(); ++l) {
    const LayerSpec& layer = net.layers[l];
    for (std::size_t t = 0; t < tape.step_count(); ++t) {
      const Vector& u = tape.entries[l][t].state.u;
      for (std::size_t i = 0; i < u.size(); ++i) {
        const double v_th = resolved[l][layer.group_of(i)].v_th;
        const double d = std::abs(std::abs(u[i] - v_th) - 0.5);
        best = std::min(best, d);
      }
    }
  }
  return best;
}

GradCheckReport gradcheck(NetworkSpec& net,
                          const std::vector<std::vector<Vector>>& inputs,
                          const std::vector<std::size_t>& labels,
                          double step_h) {
  if (inputs.empty() || inputs.size() != labels.size()) {
    throw ShapeError("gradcheck: inputs/labels mismatch");
  }

  // Analytic side: mean over samples of per-sample BPTT gradients.
  GradientSet analytic = GradientSet::zeros_like(net);
  GradCheckReport report;
  report.min_kink_distance = std::numeric_limits<double>::infinity();
  const double sample_scale = 1.0 / static_cast<double>(inputs.size());
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    const ForwardTape tape = forward(net, inputs[i], SpikeMode::Relaxed);
    report.min_kink_distance =
        std::min(report.min_kink_distance, min_kink_distance(net, tape));
    Vector lg = softmax_cross_entropy_grad(tape.logits, labels[i]);
    for (double& v : lg) v *= sample_scale;
    analytic.add(backward(net, tape, lg, SpikeMode::Relaxed));
  }

  const std::vector<FdEstimate> numeric =
      finite_difference_oracle(net, inputs, labels, step_h);
  report.entries.reserve(numeric.size());
  for (const FdEstimate& fd : numeric) {
    GradCheckEntry e;
    e.ref = fd.ref;
    e.numeric = fd.estimate;
    e.analytic = grad_at(analytic, fd.ref);
    e.rel_err = gradcheck_rel_err(e.analytic, e.numeric);
    report.max_rel_err = std::max(report.max_rel_err, e.rel_err);
    report.entries.push_back(e);
  }
  return report;
}

}  // namespace glif
