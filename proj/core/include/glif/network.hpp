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

#ifndef GLIF_NETWORK_HPP
#define GLIF_NETWORK_HPP

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "glif/linalg.hpp"
#include "glif/neuron.hpp"

namespace glif {

// Who shares one membrane-parameter set. Channel-wise gives every unit of a
// dense layer its own set (the "channel" of a dense layer is a single
// unit); layer-wise gives one set to the whole layer.
enum class SharingScheme { ChannelWise, LayerWise };

SharingScheme sharing_from_string(const std::string& name);
std::string to_string(SharingScheme s);

// One fully connected spiking layer.
struct LayerSpec {
  std::size_t in_dim = 0;
  std::size_t out_dim = 0;
  Matrix weights;                  // out_dim x in_dim
  std::vector<RawParamSet> params; // out_dim sets (channel-wise) or 1 (layer-wise)
  NeuronMode mode;

  // Index into params for unit i.
  std::size_t group_of(std::size_t unit) const {
    return params.size() == 1 ? 0 : unit;
  }
};

enum class Readout { SpikeCountMean };

// A feed-forward stack of spiking layers unrolled over T time steps. The
// readout averages the final layer's spikes over time.
struct NetworkSpec {
  std::vector<LayerSpec> layers;
  std::size_t time_steps = 0;
  SharingScheme sharing = SharingScheme::ChannelWise;
  Readout readout = Readout::SpikeCountMean;

  std::size_t in_dim() const { return layers.front().in_dim; }
  std::size_t out_dim() const { return layers.back().out_dim; }

  // Structural checks: chained dimensions, parameter-set counts matching
  // the sharing scheme, raw_g lengths equal to time_steps.
  void validate() const;
};

// Builds an unvalidated skeleton with zeroed weights and default raw
// parameters; init_params() fills it in.
NetworkSpec make_network(const std::vector<std::size_t>& dims,
                         std::size_t time_steps, SharingScheme sharing,
                         NeuronMode mode);

// Everything the backward pass needs, recorded during forward: per layer
// and time step the layer input, synaptic current, step intermediates, and
// post-step state, plus the final logits.
struct TapeEntry {
  Vector s_in;             // input to the layer at this step
  Vector c;                // synaptic current W * s_in
  StepIntermediates inter;
  LayerState state;        // state after the step
};

struct ForwardTape {
  // indexed [layer][t]
  std::vector<std::vector<TapeEntry>> entries;
  Vector logits;

  std::size_t layer_count() const { return entries.size(); }
  std::size_t step_count() const {
    return entries.empty() ? 0 : entries.front().size();
  }
};

// c = W s_in
Vector synaptic_current(const Matrix& weights, const Vector& s_in);

// Sigmoid-resolves every parameter group, indexed [layer][group].
std::vector<std::vector<NeuronGroupConfig>> resolve_network(
    const NetworkSpec& net);

// Repeats x at every time step; the first layer consumes real-valued
// currents rather than binarized spikes.
std::vector<Vector> encode_constant(const Vector& x, std::size_t time_steps);

// Runs the T-step forward pass. input is indexed [t][feature] and must
// match (time_steps, in_dim). States start at U=0, S=0. Throws ShapeError
// on mismatch and NumericError (with layer/time location) if a potential
// goes non-finite.
ForwardTape forward(const NetworkSpec& net,
                    const std::vector<Vector>& input, SpikeMode spike_mode);

// Same arithmetic without recording; returns only the logits.
Vector forward_logits(const NetworkSpec& net,
                      const std::vector<Vector>& input, SpikeMode spike_mode);

// --- Checkpoint I/O ---------------------------------------------------------
// JSON container holding topology, weights, raw parameter sets, sharing
// scheme, T, mode, and a format-version field. 64-bit values survive a
// round trip bit-exactly.

void save_checkpoint(const NetworkSpec& net, const std::filesystem::path& path);
NetworkSpec load_checkpoint(const std::filesystem::path& path);

}  // namespace glif

#endif  // GLIF_NETWORK_HPP
