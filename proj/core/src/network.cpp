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

#include "glif/network.hpp"

#include <cmath>
#include <utility>

#include "glif/error.hpp"

namespace glif {

SharingScheme sharing_from_string(const std::string& name) {
  if (name == "channel_wise") return SharingScheme::ChannelWise;
  if (name == "layer_wise") return SharingScheme::LayerWise;
  throw InvalidParamError("unknown sharing scheme '" + name +
                          "' (expected channel_wise or layer_wise)");
}

std::string to_string(SharingScheme s) {
  return s == SharingScheme::ChannelWise ? "channel_wise" : "layer_wise";
}

void NetworkSpec::validate() const {
  if (layers.empty()) throw InvalidParamError("network has no layers");
  if (time_steps == 0) throw InvalidParamError("time_steps must be positive");
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const LayerSpec& layer = layers[l];
    if (layer.in_dim == 0 || layer.out_dim == 0) {
      throw InvalidParamError("layer " + std::to_string(l) +
                              " has zero dimension");
    }
    if (layer.weights.rows != layer.out_dim ||
        layer.weights.cols != layer.in_dim) {
      throw ShapeError("layer " + std::to_string(l) +
                       " weight matrix shape mismatch");
    }
    const std::size_t expected_groups =
        sharing == SharingScheme::ChannelWise ? layer.out_dim : 1;
    if (layer.params.size() != expected_groups) {
      throw ShapeError("layer " + std::to_string(l) + " has " +
                       std::to_string(layer.params.size()) +
                       " parameter sets, expected " +
                       std::to_string(expected_groups));
    }
    for (const RawParamSet& p : layer.params) {
      if (p.raw_g.size() != time_steps) {
        throw ShapeError("layer " + std::to_string(l) +
                         " raw_g length does not match time_steps");
      }
    }
    if (l > 0 && layers[l - 1].out_dim != layer.in_dim) {
      throw ShapeError("layer " + std::to_string(l) +
                       " input dim does not chain with previous layer");
    }
  }
}

NetworkSpec make_network(const std::vector<std::size_t>& dims,
                         std::size_t time_steps, SharingScheme sharing,
                         NeuronMode mode) {
  if (dims.size() < 2) {
    throw InvalidParamError(
        "make_network needs at least input and output dims");
  }
  NetworkSpec net;
  net.time_steps = time_steps;
  net.sharing = sharing;
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    LayerSpec layer;
    layer.in_dim = dims[l];
    layer.out_dim = dims[l + 1];
    layer.weights = Matrix(layer.out_dim, layer.in_dim, 0.0);
    layer.mode = mode;
    const std::size_t groups =
        sharing == SharingScheme::ChannelWise ? layer.out_dim : 1;
    layer.params.resize(groups);
    for (RawParamSet& p : layer.params) p.raw_g.assign(time_steps, 0.0);
    net.layers.push_back(std::move(layer));
  }
  return net;
}

Vector synaptic_current(const Matrix& weights, const Vector& s_in) {
  return matvec(weights, s_in);
}

std::vector<Vector> encode_constant(const Vector& x, std::size_t time_steps) {
  for (double v : x) {
    if (!std::isfinite(v)) {
      throw InvalidParamError("encode_constant: non-finite input");
    }
  }
  return std::vector<Vector>(time_steps, x);
}

std::vector<std::vector<NeuronGroupConfig>> resolve_network(
    const NetworkSpec& net) {
  std::vector<std::vector<NeuronGroupConfig>> resolved(net.layers.size());
  for (std::size_t l = 0; l < net.layers.size(); ++l) {
    resolved[l].reserve(net.layers[l].params.size());
    for (const RawParamSet& p : net.layers[l].params) {
      resolved[l].push_back(resolve_params(p));
    }
  }
  return resolved;
}

namespace {

void check_input_shape(const NetworkSpec& net,
                       const std::vector<Vector>& input) {
  if (input.size() != net.time_steps) {
    throw ShapeError("forward: input has " + std::to_string(input.size()) +
                     " steps, network expects " +
                     std::to_string(net.time_steps));
  }
  for (const Vector& frame : input) {
    if (frame.size() != net.in_dim()) {
      throw ShapeError("forward: input frame dim " +
                       std::to_string(frame.size()) + " != network in_dim " +
                       std::to_string(net.in_dim()));
    }
  }
}

// Shared driver so the taped and tapeless paths run identical arithmetic.
// The recorder is called with (layer, t, entry) for every step.
template <typename Recorder>
Vector run_forward(const NetworkSpec& net, const std::vector<Vector>& input,
                   SpikeMode spike_mode, Recorder&& record) {
  net.validate();
  check_input_shape(net, input);
  const auto resolved = resolve_network(net);

  const std::size_t num_layers = net.layers.size();
  std::vector<LayerState> states;
  states.reserve(num_layers);
  for (const LayerSpec& layer : net.layers) {
    states.push_back(LayerState::zeros(layer.out_dim));
  }

  Vector logits(net.out_dim(), 0.0);
  for (std::size_t t = 0; t < net.time_steps; ++t) {
    const Vector* s_in = &input[t];
    for (std::size_t l = 0; l < num_layers; ++l) {
      const LayerSpec& layer = net.layers[l];
      TapeEntry entry;
      entry.s_in = *s_in;
      entry.c = synaptic_current(layer.weights, entry.s_in);

      const std::size_t n = layer.out_dim;
      entry.inter.l_total.resize(n);
      entry.inter.l_exp_part.resize(n);
      entry.inter.i_incr.resize(n);
      entry.inter.f_reset.resize(n);
      entry.state.u.resize(n);
      entry.state.s.resize(n);
      for (std::size_t i = 0; i < n; ++i) {
        const NeuronGroupConfig& cfg = resolved[l][layer.group_of(i)];
        const UnitStep r = step_unit(states[l].u[i], states[l].s[i],
                                     entry.c[i], cfg.g[t], cfg, layer.mode,
                                     spike_mode);
        entry.inter.l_total[i] = r.l_total;
        entry.inter.l_exp_part[i] = r.l_exp_part;
        entry.inter.i_incr[i] = r.i_incr;
        entry.inter.f_reset[i] = r.f_reset;
        entry.state.u[i] = r.u;
        entry.state.s[i] = r.s;
        if (!std::isfinite(r.u)) {
          throw NumericError("non-finite membrane potential at layer " +
                             std::to_string(l) + ", t=" + std::to_string(t) +
                             ", unit " + std::to_string(i));
        }
      }

      states[l] = entry.state;
      if (l == num_layers - 1) {
        for (std::size_t i = 0; i < logits.size(); ++i) {
          logits[i] += entry.state.s[i];
        }
      }
      record(l, t, std::move(entry));
      s_in = &states[l].s;
    }
  }
  const double scale = 1.0 / static_cast<double>(net.time_steps);
  for (double& v : logits) v *= scale;
  return logits;
}

}  // namespace

ForwardTape forward(const NetworkSpec& net, const std::vector<Vector>& input,
                    SpikeMode spike_mode) {
  ForwardTape tape;
  tape.entries.resize(net.layers.size());
  for (std::size_t l = 0; l < net.layers.size(); ++l) {
    tape.entries[l].resize(net.time_steps);
  }
  tape.logits = run_forward(
      net, input, spike_mode,
      [&tape](std::size_t l, std::size_t t, TapeEntry&& entry) {
        tape.entries[l][t] = std::move(entry);
      });
  return tape;
}

Vector forward_logits(const NetworkSpec& net, const std::vector<Vector>& input,
                      SpikeMode spike_mode) {
  return run_forward(net, input, spike_mode,
                     [](std::size_t, std::size_t, TapeEntry&&) {});
}

}  // namespace glif
