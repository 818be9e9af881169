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

#include "glif/dynamics.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <string>

#include "glif/error.hpp"

namespace glif {

double cosine_conductance(std::size_t t, std::size_t time_steps) {
  const double phase = 2.0 * std::numbers::pi * static_cast<double>(t) /
                       static_cast<double>(time_steps);
  return 0.05 + 0.9 * 0.5 * (1.0 + std::cos(phase));
}

void TraceSpec::validate() const {
  if (time_steps == 0) throw InvalidParamError("TraceSpec: time_steps == 0");
  for (double v : {gates.alpha, gates.beta, gates.gamma}) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw InvalidParamError("TraceSpec: gate outside [0,1]");
    }
  }
  for (double v : {tau_lin, tau_exp, v_re, v_th}) {
    if (!std::isfinite(v)) {
      throw InvalidParamError("TraceSpec: non-finite primitive");
    }
  }
  if (input.kind == InputProgram::Kind::Sequence &&
      input.sequence.size() != time_steps) {
    throw ShapeError("TraceSpec: input sequence length != time_steps");
  }
  if (g_constraint == ConductanceConstraint::Free && !g.empty() &&
      g.size() != time_steps) {
    throw ShapeError("TraceSpec: conductance table length != time_steps");
  }
}

TraceRecord simulate_trace(const TraceSpec& spec) {
  spec.validate();

  NeuronGroupConfig cfg;
  cfg.alpha = spec.gates.alpha;
  cfg.beta = spec.gates.beta;
  cfg.gamma = spec.gates.gamma;
  cfg.tau_lin = spec.tau_lin;
  cfg.tau_exp = spec.tau_exp;
  cfg.v_re = spec.v_re;
  cfg.v_th = spec.v_th;
  cfg.g.resize(spec.time_steps);
  for (std::size_t t = 0; t < spec.time_steps; ++t) {
    if (spec.g_constraint == ConductanceConstraint::Cosine) {
      cfg.g[t] = cosine_conductance(t, spec.time_steps);
    } else if (!spec.g.empty()) {
      cfg.g[t] = spec.g[t];
    } else {
      cfg.g[t] = 0.5;
    }
  }

  TraceRecord rec;
  rec.u.resize(spec.time_steps);
  rec.s.resize(spec.time_steps);
  rec.l.resize(spec.time_steps);
  rec.i.resize(spec.time_steps);
  rec.f.resize(spec.time_steps);
  rec.g_effective = cfg.g;

  double u = spec.u0;
  double s = spec.s0;
  for (std::size_t t = 0; t < spec.time_steps; ++t) {
    const UnitStep r = gated_step_unit(u, s, spec.input.at(t), cfg.g[t], cfg,
                                       spec.gates, spec.spike_mode);
    rec.u[t] = r.u;
    rec.s[t] = r.s;
    rec.l[t] = r.l_total;
    rec.i[t] = r.i_incr;
    rec.f[t] = r.f_reset;
    u = r.u;
    s = r.s;
  }
  return rec;
}

double saturation_point(const NeuronGroupConfig& cfg, double c) {
  if (!(cfg.tau_exp > 0.0 && cfg.tau_exp < 1.0)) {
    throw InvalidParamError("saturation_point: tau_exp must lie in (0,1)");
  }
  return c / (1.0 - cfg.tau_exp);
}

double saturation_point(const TraceSpec& spec, double c) {
  NeuronGroupConfig cfg;
  cfg.tau_exp = spec.tau_exp;
  return saturation_point(cfg, c);
}

void export_trace_csv(const TraceRecord& record,
                      const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw ParseError("cannot open trace file for writing: " + path.string());
  }
  out << "t,U,S,L,I,F,g\n";
  char buf[220];
  for (std::size_t t = 0; t < record.size(); ++t) {
    std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                  t, record.u[t], record.s[t], record.l[t], record.i[t],
                  record.f[t], record.g_effective[t]);
    out << buf;
  }
  if (!out.good()) throw ParseError("failed writing trace: " + path.string());
}

void export_param_histograms(const NetworkSpec& net,
                             const std::filesystem::path& path,
                             std::size_t bins) {
  if (bins == 0) throw InvalidParamError("export_param_histograms: bins == 0");
  net.validate();
  const auto resolved = resolve_network(net);

  std::ofstream out(path);
  if (!out) {
    throw ParseError("cannot open histogram file for writing: " +
                     path.string());
  }
  out << "layer,param,bin_index,bin_lo,bin_hi,count\n";

  const char* const names[8] = {"alpha",   "beta", "gamma", "tau_lin",
                                "tau_exp", "v_re", "v_th",  "g"};
  char buf[160];
  for (std::size_t l = 0; l < resolved.size(); ++l) {
    for (int param = 0; param < 8; ++param) {
      std::vector<std::size_t> counts(bins, 0);
      for (const NeuronGroupConfig& cfg : resolved[l]) {
        Vector values;
        switch (param) {
          case 0: values = {cfg.alpha}; break;
          case 1: values = {cfg.beta}; break;
          case 2: values = {cfg.gamma}; break;
          case 3: values = {cfg.tau_lin}; break;
          case 4: values = {cfg.tau_exp}; break;
          case 5: values = {cfg.v_re}; break;
          case 6: values = {cfg.v_th}; break;
          default: values = cfg.g; break;
        }
        for (double v : values) {
          // Resolved values lie strictly inside (0,1); the edge clamp only
          // guards against values rounding to exactly 1.
          std::size_t idx = static_cast<std::size_t>(
              v * static_cast<double>(bins));
          if (idx >= bins) idx = bins - 1;
          ++counts[idx];
        }
      }
      for (std::size_t b = 0; b < bins; ++b) {
        const double lo = static_cast<double>(b) / static_cast<double>(bins);
        const double hi =
            static_cast<double>(b + 1) / static_cast<double>(bins);
        std::snprintf(buf, sizeof(buf), "%zu,%s,%zu,%.17g,%.17g,%zu\n", l,
                      names[param], b, lo, hi, counts[b]);
        out << buf;
      }
    }
  }
  if (!out.good()) {
    throw ParseError("failed writing histograms: " + path.string());
  }
}

}  // namespace glif
