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
#include <limits>

#include "doctest.h"
#include "glif/error.hpp"
#include "glif/rng.hpp"

using namespace glif;

namespace {

NeuronGroupConfig test_config(std::size_t steps = 4) {
  NeuronGroupConfig cfg;
  cfg.alpha = 0.5;
  cfg.beta = 0.5;
  cfg.gamma = 0.5;
  cfg.tau_lin = 0.0625;
  cfg.tau_exp = 0.25;
  cfg.v_re = 0.5;
  cfg.v_th = 0.5;
  cfg.g.assign(steps, 0.5);
  return cfg;
}

RawParamSet zero_raw(std::size_t steps = 4) {
  RawParamSet raw;
  raw.raw_g.assign(steps, 0.0);
  return raw;
}

}  // namespace

TEST_CASE("sigmoid resolution of raw parameters") {
  RawParamSet raw = zero_raw();
  NeuronGroupConfig cfg = resolve_params(raw);
  CHECK(cfg.alpha == 0.5);
  CHECK(cfg.v_th == 0.5);
  CHECK(cfg.g[0] == 0.5);

  // Endpoints of the gate initialization range.
  raw.raw_alpha = -0.2;
  raw.raw_beta = 0.2;
  cfg = resolve_params(raw);
  CHECK(cfg.alpha == doctest::Approx(0.45016600268752216).epsilon(1e-14));
  CHECK(cfg.beta == doctest::Approx(0.5498339973124778).epsilon(1e-14));

  // Round trip with the inverse-sigmoid oracle.
  raw.raw_tau_exp = logit(0.25);
  CHECK(raw.raw_tau_exp == doctest::Approx(-1.0986122886681098).epsilon(1e-15));
  cfg = resolve_params(raw);
  CHECK(cfg.tau_exp == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("resolve_params rejects non-finite input") {
  RawParamSet raw = zero_raw();
  raw.raw_v_th = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(resolve_params(raw), InvalidParamError);
  raw = zero_raw();
  raw.raw_g[2] = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(resolve_params(raw), InvalidParamError);
}

TEST_CASE("resolved parameters stay strictly inside (0,1) and are monotone") {
  Rng rng(11);
  double prev = 0.0;
  bool first = true;
  for (double x : {-1e9, -745.0, -37.0, -2.0, 0.0, 2.0, 37.0, 745.0, 1e9}) {
    RawParamSet raw = zero_raw();
    raw.raw_alpha = x;
    const double v = resolve_params(raw).alpha;
    CHECK(v > 0.0);
    CHECK(v < 1.0);
    if (!first) CHECK(v >= prev);
    prev = v;
    first = false;
  }
  // Strict monotonicity away from saturation.
  for (int i = 0; i < 100; ++i) {
    const double x = rng.uniform(-20.0, 20.0);
    const double d = rng.uniform(1e-6, 1.0);
    CHECK(sigmoid(x + d) > sigmoid(x));
  }
}

TEST_CASE("leakage gate") {
  NeuronGroupConfig cfg = test_config();
  const Vector u{1.0};

  SUBCASE("hand value") {
    const LeakResult r = gate_alpha(u, cfg);
    CHECK(r.l_exp_part[0] == doctest::Approx(0.625).epsilon(1e-15));
    CHECK(r.l_total[0] == doctest::Approx(0.59375).epsilon(1e-15));
  }
  SUBCASE("alpha=0 is pure linear decay") {
    cfg.alpha = 0.0;
    const LeakResult r = gate_alpha(u, cfg);
    CHECK(r.l_total[0] == 1.0 - cfg.tau_lin);
  }
  SUBCASE("alpha=1 is pure exponential decay") {
    cfg.alpha = 1.0;
    const LeakResult r = gate_alpha(u, cfg);
    CHECK(r.l_total[0] == cfg.tau_exp * 1.0);
  }
  SUBCASE("affine interpolation in alpha") {
    Rng rng(3);
    for (int i = 0; i < 50; ++i) {
      const Vector up{rng.uniform(-2.0, 2.0)};
      cfg.tau_exp = rng.uniform(0.05, 0.95);
      cfg.tau_lin = rng.uniform(0.05, 0.95);
      cfg.alpha = 0.0;
      const double at0 = gate_alpha(up, cfg).l_total[0];
      cfg.alpha = 1.0;
      const double at1 = gate_alpha(up, cfg).l_total[0];
      const double a = rng.uniform(0.0, 1.0);
      cfg.alpha = a;
      const double at_a = gate_alpha(up, cfg).l_total[0];
      CHECK(at_a == doctest::Approx(at0 + a * (at1 - at0)).epsilon(1e-12));
    }
  }
}

TEST_CASE("integration gate") {
  NeuronGroupConfig cfg = test_config();
  const Vector c{2.0};

  cfg.beta = 0.5;
  cfg.g[1] = 0.5;
  CHECK(gate_beta(c, 1, cfg)[0] == doctest::Approx(1.5).epsilon(1e-15));

  cfg.beta = 0.0;
  CHECK(gate_beta(c, 0, cfg)[0] == 2.0);

  cfg.beta = 1.0;
  cfg.g[0] = 0.3;
  CHECK(gate_beta(c, 0, cfg)[0] == doctest::Approx(0.3 * 2.0).epsilon(1e-15));

  CHECK_THROWS_AS(gate_beta(c, 4, cfg), std::out_of_range);
}

TEST_CASE("reset gate") {
  NeuronGroupConfig cfg = test_config();
  const Vector l_exp{0.8};

  cfg.gamma = 0.5;
  CHECK(gate_gamma(l_exp, cfg)[0] == doctest::Approx(-0.65).epsilon(1e-15));

  cfg.gamma = 1.0;
  CHECK(gate_gamma(l_exp, cfg)[0] == -0.8);

  cfg.gamma = 0.0;
  CHECK(gate_gamma(l_exp, cfg)[0] == -0.5);
}

TEST_CASE("spike nonlinearity") {
  const double v_th = 0.5;
  SUBCASE("threshold equality fires") {
    CHECK(spike({0.5}, v_th, SpikeMode::Spiking)[0] == 1.0);
  }
  SUBCASE("relaxed ramp") {
    CHECK(spike({0.25}, v_th, SpikeMode::Relaxed)[0] ==
          doctest::Approx(0.25).epsilon(1e-15));
  }
  SUBCASE("saturation in both modes") {
    CHECK(spike({2.5}, v_th, SpikeMode::Spiking)[0] == 1.0);
    CHECK(spike({2.5}, v_th, SpikeMode::Relaxed)[0] == 1.0);
    CHECK(spike({-2.5}, v_th, SpikeMode::Relaxed)[0] == 0.0);
  }
  SUBCASE("binary output is idempotent under re-thresholding") {
    Rng rng(7);
    for (int i = 0; i < 200; ++i) {
      const double u = rng.uniform(-2.0, 2.0);
      const double s = spike_scalar(u, v_th, SpikeMode::Spiking);
      CHECK((s == 0.0 || s == 1.0));
      const double again =
          spike_scalar(v_th + 1e6 * s - 1e6 * (1.0 - s), v_th,
                       SpikeMode::Spiking);
      CHECK(again == s);
    }
  }
}

TEST_CASE("surrogate gradient window") {
  CHECK(surrogate_grad(0.0) == 1.0);
  CHECK(surrogate_grad(0.6) == 0.0);
  CHECK(surrogate_grad(-0.6) == 0.0);
  CHECK(surrogate_grad(0.5) == 1.0);
  CHECK(surrogate_grad(-0.5) == 1.0);
}

TEST_CASE("surrogate equals the relaxed derivative away from the kinks") {
  Rng rng(13);
  for (int i = 0; i < 500; ++i) {
    const double x = rng.uniform(-1.5, 1.5);
    if (std::abs(std::abs(x) - 0.5) < 1e-3) continue;
    const double h = 1e-7;
    const double fd = (spike_scalar(x + h, 0.0, SpikeMode::Relaxed) -
                       spike_scalar(x - h, 0.0, SpikeMode::Relaxed)) /
                      (2.0 * h);
    CHECK(surrogate_grad(x) == doctest::Approx(fd).epsilon(1e-6));
  }
}

TEST_CASE("glif step hand trace with frozen vanilla gates") {
  NeuronGroupConfig cfg = test_config();
  cfg.tau_exp = 0.5;
  cfg.v_th = 0.5;
  const NeuronMode mode = NeuronMode::frozen(true, false, true);

  LayerState state = LayerState::zeros(1);
  const Vector c{0.3};
  const double expected_u[4] = {0.3, 0.45, 0.525, 0.3};
  const double expected_s[4] = {0.0, 0.0, 1.0, 0.0};
  for (std::size_t t = 0; t < 4; ++t) {
    StepResult r = glif_step(state, c, t, cfg, mode, SpikeMode::Spiking);
    CHECK(r.state.u[0] == doctest::Approx(expected_u[t]).epsilon(1e-14));
    CHECK(r.state.s[0] == expected_s[t]);
    state = r.state;
  }
}

TEST_CASE("glif step edge behaviors") {
  NeuronGroupConfig cfg = test_config();

  SUBCASE("pure exponential decay with no input") {
    const GateValues gates{1.0, 0.0, 0.0};
    const UnitStep r =
        gated_step_unit(0.8, 0.0, 0.0, cfg.g[0], cfg, gates,
                        SpikeMode::Spiking);
    CHECK(r.u == cfg.tau_exp * 0.8);
  }
  SUBCASE("hard reset exactly cancels the exponential part") {
    const GateValues gates{1.0, 0.0, 1.0};
    const UnitStep r =
        gated_step_unit(0.8, 1.0, 0.0, cfg.g[0], cfg, gates,
                        SpikeMode::Spiking);
    CHECK(r.u == 0.0);
  }
  SUBCASE("length mismatch throws") {
    LayerState state = LayerState::zeros(2);
    CHECK_THROWS_AS(
        glif_step(state, Vector{0.1}, 0, cfg, NeuronMode::glif(),
                  SpikeMode::Spiking),
        ShapeError);
  }
  SUBCASE("intermediates satisfy their definitions") {
    Rng rng(17);
    for (int i = 0; i < 100; ++i) {
      cfg.alpha = rng.uniform(0.01, 0.99);
      cfg.tau_exp = rng.uniform(0.01, 0.99);
      LayerState state{{rng.uniform(-2.0, 2.0)},
                       {rng.uniform() < 0.5 ? 0.0 : 1.0}};
      StepResult r = glif_step(state, {rng.uniform(-1.0, 1.0)}, 0, cfg,
                               NeuronMode::glif(), SpikeMode::Spiking);
      const double k = 1.0 - cfg.alpha * (1.0 - cfg.tau_exp);
      CHECK(r.inter.l_exp_part[0] ==
            doctest::Approx(k * state.u[0]).epsilon(1e-15));
      CHECK(r.state.u[0] ==
            doctest::Approx(r.inter.l_total[0] + r.inter.i_incr[0] +
                            r.inter.f_reset[0] * state.s[0])
                .epsilon(1e-15));
    }
  }
}

TEST_CASE("vanilla LIF reference step") {
  SUBCASE("tau=0 is memoryless") {
    LayerState state{{0.7}, {0.0}};
    const LayerState r = vanilla_lif_step(state, {0.3}, 0.0, 0.5);
    CHECK(r.u[0] == 0.3);
  }
  SUBCASE("post-spike hand value") {
    LayerState state{{0.8}, {1.0}};
    const LayerState r = vanilla_lif_step(state, {0.1}, 0.5, 0.5);
    CHECK(r.u[0] == doctest::Approx(0.1).epsilon(1e-15));
  }
}

TEST_CASE("frozen (1,0,1) GLIF is the vanilla LIF on 1000 random steps") {
  Rng rng(101);
  const NeuronMode frozen101 = NeuronMode::frozen(true, false, true);
  double max_diff = 0.0;
  for (int i = 0; i < 1000; ++i) {
    NeuronGroupConfig cfg = test_config(1);
    cfg.tau_exp = rng.uniform(0.02, 0.98);
    cfg.v_th = rng.uniform(0.1, 0.9);
    LayerState state{{rng.uniform(-2.0, 2.0)},
                     {rng.uniform() < 0.5 ? 0.0 : 1.0}};
    const Vector c{rng.uniform(-1.0, 1.0)};

    const StepResult gated =
        glif_step(state, c, 0, cfg, frozen101, SpikeMode::Spiking);
    const LayerState vanilla = vanilla_lif_step(state, c, cfg.tau_exp, cfg.v_th);

    max_diff = std::max(max_diff, std::abs(gated.state.u[0] - vanilla.u[0]));
    CHECK(gated.state.s[0] == vanilla.s[0]);
  }
  CHECK(max_diff <= 1e-12);
}

TEST_CASE("no-input decay properties") {
  NeuronGroupConfig cfg = test_config(64);

  SUBCASE("exponential: U_t = tau_exp^t * U_0, monotone non-increasing magnitude") {
    const GateValues gates{1.0, 0.0, 0.0};
    double u = 1.7;
    const double u0 = u;
    for (int t = 1; t <= 40; ++t) {
      const double prev = u;
      u = gated_step_unit(u, 0.0, 0.0, 0.5, cfg, gates, SpikeMode::Spiking).u;
      CHECK(std::abs(u) <= std::abs(prev));
      CHECK(u == doctest::Approx(u0 * std::pow(cfg.tau_exp, t)).epsilon(1e-12));
    }
  }
  SUBCASE("linear: exact arithmetic progression, unbounded below") {
    // tau_lin = 0.0625 is dyadic, so every subtraction is exact.
    const GateValues gates{0.0, 0.0, 0.0};
    double u = 0.5;
    for (int t = 1; t <= 64; ++t) {
      u = gated_step_unit(u, 0.0, 0.0, 0.5, cfg, gates, SpikeMode::Spiking).u;
      CHECK(u == 0.5 - t * 0.0625);
    }
    CHECK(u < -3.0);
  }
}

TEST_CASE("saturation fixed point under constant input") {
  // alpha=1, beta=0, v_th above c/(1-tau_exp): geometric convergence with
  // ratio tau_exp to the closed-form fixed point.
  NeuronGroupConfig cfg = test_config(1);
  cfg.tau_exp = 0.5;
  cfg.v_th = 0.99;  // above the fixed point, never spikes
  const double c = 0.3;
  const double target = c / (1.0 - cfg.tau_exp);
  const GateValues gates{1.0, 0.0, 0.0};

  double u = 0.0;
  for (int t = 1; t <= 30; ++t) {
    u = gated_step_unit(u, 0.0, c, 0.5, cfg, gates, SpikeMode::Spiking).u;
    const double expected_gap = std::pow(cfg.tau_exp, t) * target;
    CHECK(std::abs(u - target) == doctest::Approx(expected_gap).epsilon(1e-10));
  }
}

TEST_CASE("stacked-primitives step (gate-free variant)") {
  NeuronGroupConfig cfg = test_config();
  cfg.tau_exp = 0.25;
  cfg.tau_lin = 0.0625;
  cfg.v_re = 0.5;
  cfg.g[0] = 0.5;

  SUBCASE("no reset branch") {
    LayerState state{{0.8}, {0.0}};
    const StepResult r = glif_f_step(state, {0.4}, 0, cfg, SpikeMode::Spiking);
    CHECK(r.state.u[0] ==
          doctest::Approx(0.25 * 0.8 - 0.0625 + 0.5 * 0.4).epsilon(1e-15));
  }
  SUBCASE("post-spike with zero input") {
    LayerState state{{0.8}, {1.0}};
    const StepResult r = glif_f_step(state, {0.0}, 0, cfg, SpikeMode::Spiking);
    CHECK(r.state.u[0] == doctest::Approx(-0.0625 - 0.5).epsilon(1e-15));
  }
  SUBCASE("differs from the gated step on a generic config") {
    LayerState state{{0.8}, {1.0}};
    const Vector c{0.4};
    const StepResult fused = glif_f_step(state, c, 0, cfg, SpikeMode::Spiking);
    const StepResult gated = glif_step(state, c, 0, cfg, NeuronMode::glif(),
                                       SpikeMode::Spiking);
    CHECK(fused.state.u[0] != gated.state.u[0]);
  }
}

TEST_CASE("neuron mode names round-trip") {
  for (const char* name :
       {"glif", "glif_s", "glif_f", "vanilla", "000", "101", "111", "010"}) {
    CHECK(NeuronMode::from_string(name).name() == name);
  }
  CHECK_THROWS_AS(NeuronMode::from_string("glif_x"), InvalidParamError);
  CHECK_THROWS_AS(NeuronMode::from_string("10"), InvalidParamError);

  // The bit triple enumerates exactly eight distinct simplex models.
  int count = 0;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      for (int c = 0; c < 2; ++c) {
        const NeuronMode m = NeuronMode::frozen(a, b, c);
        CHECK(m.kind == NeuronKind::SimplexFrozen);
        ++count;
      }
    }
  }
  CHECK(count == 8);
}
