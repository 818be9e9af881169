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

#include <fstream>

#include "glif/error.hpp"
#include "glif/network.hpp"

#include <nlohmann/json.hpp>

namespace glif {

namespace {

using nlohmann::json;

constexpr int kFormatVersion = 1;

json params_to_json(const RawParamSet& p) {
  return json{{"raw_alpha", p.raw_alpha},     {"raw_beta", p.raw_beta},
              {"raw_gamma", p.raw_gamma},     {"raw_tau_lin", p.raw_tau_lin},
              {"raw_tau_exp", p.raw_tau_exp}, {"raw_v_re", p.raw_v_re},
              {"raw_v_th", p.raw_v_th},       {"raw_g", p.raw_g}};
}

RawParamSet params_from_json(const json& j) {
  RawParamSet p;
  p.raw_alpha = j.at("raw_alpha").get<double>();
  p.raw_beta = j.at("raw_beta").get<double>();
  p.raw_gamma = j.at("raw_gamma").get<double>();
  p.raw_tau_lin = j.at("raw_tau_lin").get<double>();
  p.raw_tau_exp = j.at("raw_tau_exp").get<double>();
  p.raw_v_re = j.at("raw_v_re").get<double>();
  p.raw_v_th = j.at("raw_v_th").get<double>();
  p.raw_g = j.at("raw_g").get<Vector>();
  return p;
}

}  // namespace

void save_checkpoint(const NetworkSpec& net,
                     const std::filesystem::path& path) {
  net.validate();
  json root;
  root["format_version"] = kFormatVersion;
  root["time_steps"] = net.time_steps;
  root["sharing"] = to_string(net.sharing);
  root["readout"] = "spike_count_mean";
  json layers = json::array();
  for (const LayerSpec& layer : net.layers) {
    json jl;
    jl["in_dim"] = layer.in_dim;
    jl["out_dim"] = layer.out_dim;
    jl["mode"] = layer.mode.name();
    jl["weights"] = layer.weights.data;  // row-major, out_dim x in_dim
    json groups = json::array();
    for (const RawParamSet& p : layer.params) groups.push_back(params_to_json(p));
    jl["params"] = std::move(groups);
    layers.push_back(std::move(jl));
  }
  root["layers"] = std::move(layers);

  std::ofstream out(path);
  if (!out) {
    throw ParseError("cannot open checkpoint file for writing: " +
                     path.string());
  }
  out << root.dump(1, '\t') << '\n';
  if (!out.good()) {
    throw ParseError("failed writing checkpoint: " + path.string());
  }
}

NetworkSpec load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError("cannot open checkpoint file: " + path.string());
  }
  json root;
  try {
    in >> root;
  } catch (const json::exception& e) {
    throw ParseError("malformed checkpoint " + path.string() + ": " +
                     e.what());
  }
  try {
    const int version = root.at("format_version").get<int>();
    if (version != kFormatVersion) {
      throw ParseError("unsupported checkpoint format version " +
                       std::to_string(version));
    }
    NetworkSpec net;
    net.time_steps = root.at("time_steps").get<std::size_t>();
    net.sharing = sharing_from_string(root.at("sharing").get<std::string>());
    for (const json& jl : root.at("layers")) {
      LayerSpec layer;
      layer.in_dim = jl.at("in_dim").get<std::size_t>();
      layer.out_dim = jl.at("out_dim").get<std::size_t>();
      layer.mode = NeuronMode::from_string(jl.at("mode").get<std::string>());
      layer.weights = Matrix(layer.out_dim, layer.in_dim);
      layer.weights.data = jl.at("weights").get<std::vector<double>>();
      if (layer.weights.data.size() != layer.out_dim * layer.in_dim) {
        throw ParseError("weight array size mismatch in checkpoint");
      }
      for (const json& jp : jl.at("params")) {
        layer.params.push_back(params_from_json(jp));
      }
      net.layers.push_back(std::move(layer));
    }
    net.validate();
    return net;
  } catch (const json::exception& e) {
    throw ParseError("invalid checkpoint " + path.string() + ": " + e.what());
  }
}

}  // namespace glif
