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

#ifndef GLIF_DATASETS_HPP
#define GLIF_DATASETS_HPP

#include <cstddef>
#include <filesystem>
#include <vector>

#include "glif/linalg.hpp"
#include "glif/rng.hpp"

namespace glif {

// One labeled sample: a (time_steps x dim) input program and a class.
struct LabeledSample {
  std::vector<Vector> input;  // [t][feature]
  std::size_t label = 0;
};

struct LabeledSpikeDataset {
  std::vector<LabeledSample> samples;
  std::size_t num_classes = 0;
  std::size_t time_steps = 0;
  std::size_t dim = 0;

  void validate() const;
};

enum class SyntheticTask { RatePatterns, TemporalPositionPatterns };

// Desk-scale synthetic tasks exercising the temporal mechanisms.
//
// RatePatterns: class k has a distinct mean intensity vector (a bump of
// height 1/sqrt(2) on feature k over a flat baseline, so class means sit at
// pairwise Euclidean distance exactly 1); Gaussian noise is added once per
// sample and the result is constant over time.
//
// TemporalPositionPatterns: class k drives every feature with a fixed-width
// burst in time window k; all classes carry identical total input summed
// over time, so only burst timing separates them.
struct SyntheticTaskSpec {
  SyntheticTask variant = SyntheticTask::RatePatterns;
  std::size_t dim = 16;
  std::size_t time_steps = 8;
  std::size_t num_classes = 3;
  double noise_std = 0.1;
  std::uint64_t seed = 0;
  std::size_t samples_per_class = 100;

  void validate() const;
};

LabeledSpikeDataset gen_rate_task(const SyntheticTaskSpec& spec);
LabeledSpikeDataset gen_temporal_task(const SyntheticTaskSpec& spec);
LabeledSpikeDataset generate(const SyntheticTaskSpec& spec);

// Disjoint, exhaustive split: the last ceil(eval_fraction * n) samples of a
// seeded shuffle become the evaluation set.
struct SplitDataset {
  LabeledSpikeDataset train;
  LabeledSpikeDataset eval;
};
SplitDataset split_dataset(const LabeledSpikeDataset& ds, double eval_fraction,
                           std::uint64_t seed);

// Seed-deterministic epoch ordering.
std::vector<std::size_t> shuffled_indices(std::size_t n, std::uint64_t seed,
                                          std::size_t epoch);

// --- File ingestion -----------------------------------------------------------
// CSV: header row `label,f0,f1,...`; one sample per row. Features are
// normalized to [0,1] (identity when already inside, min-max otherwise)
// and constant-encoded over time_steps.
LabeledSpikeDataset load_csv(const std::filesystem::path& path,
                             std::size_t time_steps);

// Writes the t=0 frame of each sample (datasets produced by load_csv /
// encode_constant are constant over time).
void save_csv(const LabeledSpikeDataset& ds, const std::filesystem::path& path);

// IDX pair (big-endian magic-number layout): a u8 or f32/f64 data file plus
// a u8 label file. u8 data is scaled by 1/255.
LabeledSpikeDataset load_idx(const std::filesystem::path& data_path,
                             const std::filesystem::path& labels_path,
                             std::size_t time_steps);

}  // namespace glif

#endif  // GLIF_DATASETS_HPP
