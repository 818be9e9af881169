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

#include "glif/datasets.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <string>

#include "glif/error.hpp"
#include "glif/network.hpp"

namespace glif {

void LabeledSpikeDataset::validate() const {
  for (const LabeledSample& s : samples) {
    if (s.input.size() != time_steps) {
      throw ShapeError("dataset sample has wrong number of time steps");
    }
    for (const Vector& frame : s.input) {
      if (frame.size() != dim) {
        throw ShapeError("dataset sample has wrong feature dim");
      }
    }
    if (s.label >= num_classes) {
      throw InvalidParamError("dataset label out of range");
    }
  }
}

void SyntheticTaskSpec::validate() const {
  if (dim == 0 || time_steps == 0 || num_classes < 2 ||
      samples_per_class == 0) {
    throw InvalidParamError("degenerate synthetic task spec");
  }
  if (noise_std < 0.0 || !std::isfinite(noise_std)) {
    throw InvalidParamError("synthetic task: invalid noise_std");
  }
  if (variant == SyntheticTask::RatePatterns && num_classes > dim) {
    throw InvalidParamError(
        "rate task needs num_classes <= dim for distinct class means");
  }
  if (variant == SyntheticTask::TemporalPositionPatterns &&
      time_steps < num_classes) {
    throw InvalidParamError("temporal task needs time_steps >= num_classes");
  }
}

namespace {

constexpr double kRateBaseline = 0.2;
// Bump height 1/sqrt(2): two one-hot bumps differ in exactly two
// coordinates, putting class means at pairwise distance 1.
const double kRateBump = 1.0 / std::sqrt(2.0);
constexpr double kBurstAmplitude = 1.0;

}  // namespace

LabeledSpikeDataset gen_rate_task(const SyntheticTaskSpec& spec) {
  spec.validate();
  if (spec.variant != SyntheticTask::RatePatterns) {
    throw InvalidParamError("gen_rate_task: spec variant mismatch");
  }
  Rng rng(spec.seed);
  LabeledSpikeDataset ds;
  ds.num_classes = spec.num_classes;
  ds.time_steps = spec.time_steps;
  ds.dim = spec.dim;
  ds.samples.reserve(spec.num_classes * spec.samples_per_class);
  for (std::size_t k = 0; k < spec.num_classes; ++k) {
    for (std::size_t s = 0; s < spec.samples_per_class; ++s) {
      Vector x(spec.dim, kRateBaseline);
      x[k] += kRateBump;
      for (double& v : x) v += rng.gaussian(0.0, spec.noise_std);
      ds.samples.push_back({encode_constant(x, spec.time_steps), k});
    }
  }
  return ds;
}

LabeledSpikeDataset gen_temporal_task(const SyntheticTaskSpec& spec) {
  spec.validate();
  if (spec.variant != SyntheticTask::TemporalPositionPatterns) {
    throw InvalidParamError("gen_temporal_task: spec variant mismatch");
  }
  Rng rng(spec.seed);
  LabeledSpikeDataset ds;
  ds.num_classes = spec.num_classes;
  ds.time_steps = spec.time_steps;
  ds.dim = spec.dim;
  ds.samples.reserve(spec.num_classes * spec.samples_per_class);
  // Every class gets the same burst width, so total input over time is
  // identical across classes by construction.
  const std::size_t width = spec.time_steps / spec.num_classes;
  for (std::size_t k = 0; k < spec.num_classes; ++k) {
    const std::size_t start = k * width;
    for (std::size_t s = 0; s < spec.samples_per_class; ++s) {
      std::vector<Vector> input(spec.time_steps, Vector(spec.dim, 0.0));
      for (std::size_t t = start; t < start + width; ++t) {
        for (double& v : input[t]) v = kBurstAmplitude;
      }
      if (spec.noise_std > 0.0) {
        for (Vector& frame : input) {
          for (double& v : frame) v += rng.gaussian(0.0, spec.noise_std);
        }
      }
      ds.samples.push_back({std::move(input), k});
    }
  }
  return ds;
}

LabeledSpikeDataset generate(const SyntheticTaskSpec& spec) {
  return spec.variant == SyntheticTask::RatePatterns ? gen_rate_task(spec)
                                                     : gen_temporal_task(spec);
}

SplitDataset split_dataset(const LabeledSpikeDataset& ds, double eval_fraction,
                           std::uint64_t seed) {
  if (!(eval_fraction >= 0.0 && eval_fraction < 1.0)) {
    throw InvalidParamError("split_dataset: eval_fraction outside [0,1)");
  }
  std::vector<std::size_t> order(ds.samples.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng(seed);
  rng.shuffle(order);

  const std::size_t eval_count = static_cast<std::size_t>(
      std::ceil(eval_fraction * static_cast<double>(ds.samples.size())));
  SplitDataset out;
  out.train.num_classes = out.eval.num_classes = ds.num_classes;
  out.train.time_steps = out.eval.time_steps = ds.time_steps;
  out.train.dim = out.eval.dim = ds.dim;
  for (std::size_t i = 0; i < order.size(); ++i) {
    LabeledSpikeDataset& target =
        i + eval_count >= order.size() ? out.eval : out.train;
    target.samples.push_back(ds.samples[order[i]]);
  }
  return out;
}

std::vector<std::size_t> shuffled_indices(std::size_t n, std::uint64_t seed,
                                          std::size_t epoch) {
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  Rng rng = Rng(seed).child(0x5u).child(epoch);
  rng.shuffle(order);
  return order;
}

// --- CSV ----------------------------------------------------------------------

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  fields.push_back(cur);
  return fields;
}

double parse_double(const std::string& s, const std::filesystem::path& path,
                    std::size_t line_no) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ParseError(path.string() + ":" + std::to_string(line_no) +
                     ": cannot parse number '" + s + "'");
  }
}

}  // namespace

LabeledSpikeDataset load_csv(const std::filesystem::path& path,
                             std::size_t time_steps) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open CSV file: " + path.string());

  std::string line;
  if (!std::getline(in, line)) {
    throw ParseError(path.string() + ": empty file (expected header row)");
  }
  const std::vector<std::string> header = split_fields(line);
  if (header.size() < 2 || header[0] != "label") {
    throw ParseError(path.string() +
                     ":1: expected header 'label,f0,f1,...'");
  }
  const std::size_t dim = header.size() - 1;

  std::vector<Vector> rows;
  std::vector<std::size_t> labels;
  std::size_t line_no = 1;
  std::size_t max_label = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::vector<std::string> fields = split_fields(line);
    if (fields.size() != dim + 1) {
      throw ParseError(path.string() + ":" + std::to_string(line_no) +
                       ": expected " + std::to_string(dim + 1) +
                       " fields, got " + std::to_string(fields.size()));
    }
    const double label_val = parse_double(fields[0], path, line_no);
    if (label_val < 0.0 || label_val != std::floor(label_val)) {
      throw ParseError(path.string() + ":" + std::to_string(line_no) +
                       ": label must be a non-negative integer");
    }
    const std::size_t label = static_cast<std::size_t>(label_val);
    max_label = std::max(max_label, label);
    Vector x(dim);
    for (std::size_t i = 0; i < dim; ++i) {
      x[i] = parse_double(fields[i + 1], path, line_no);
    }
    rows.push_back(std::move(x));
    labels.push_back(label);
  }
  if (rows.empty()) {
    throw ParseError(path.string() + ": no samples (header only)");
  }

  // Normalize features into [0,1]; values already inside pass through
  // unchanged so written datasets round-trip exactly.
  double lo = rows[0][0], hi = rows[0][0];
  for (const Vector& x : rows) {
    for (double v : x) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  if (lo < 0.0 || hi > 1.0) {
    const double span = hi > lo ? hi - lo : 1.0;
    for (Vector& x : rows) {
      for (double& v : x) v = (v - lo) / span;
    }
  }

  LabeledSpikeDataset ds;
  ds.num_classes = max_label + 1;
  ds.time_steps = time_steps;
  ds.dim = dim;
  ds.samples.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    ds.samples.push_back({encode_constant(rows[i], time_steps), labels[i]});
  }
  return ds;
}

void save_csv(const LabeledSpikeDataset& ds,
              const std::filesystem::path& path) {
  ds.validate();
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open CSV file for writing: " + path.string());
  out << "label";
  for (std::size_t i = 0; i < ds.dim; ++i) out << ",f" << i;
  out << '\n';
  char buf[40];
  for (const LabeledSample& s : ds.samples) {
    out << s.label;
    for (double v : s.input[0]) {
      std::snprintf(buf, sizeof(buf), "%.17g", v);
      out << ',' << buf;
    }
    out << '\n';
  }
  if (!out.good()) throw ParseError("failed writing CSV: " + path.string());
}

// --- IDX ----------------------------------------------------------------------

namespace {

std::uint32_t read_u32_be(std::istream& in, const std::filesystem::path& path) {
  unsigned char b[4];
  if (!in.read(reinterpret_cast<char*>(b), 4)) {
    throw ParseError(path.string() + ": truncated IDX header");
  }
  return (std::uint32_t(b[0]) << 24) | (std::uint32_t(b[1]) << 16) |
         (std::uint32_t(b[2]) << 8) | std::uint32_t(b[3]);
}

struct IdxHeader {
  int dtype = 0;
  std::vector<std::uint32_t> dims;
};

IdxHeader read_idx_header(std::istream& in, const std::filesystem::path& path) {
  const std::uint32_t magic = read_u32_be(in, path);
  if ((magic & 0xFFFF0000u) != 0) {
    throw ParseError(path.string() + ": bad IDX magic number");
  }
  IdxHeader h;
  h.dtype = static_cast<int>((magic >> 8) & 0xFF);
  const int ndims = static_cast<int>(magic & 0xFF);
  if (ndims < 1 || ndims > 4) {
    throw ParseError(path.string() + ": unsupported IDX rank " +
                     std::to_string(ndims));
  }
  for (int i = 0; i < ndims; ++i) h.dims.push_back(read_u32_be(in, path));
  return h;
}

double read_idx_value(std::istream& in, int dtype,
                      const std::filesystem::path& path) {
  switch (dtype) {
    case 0x08: {  // unsigned byte
      unsigned char b;
      if (!in.read(reinterpret_cast<char*>(&b), 1)) {
        throw ParseError(path.string() + ": truncated IDX data");
      }
      return static_cast<double>(b) / 255.0;
    }
    case 0x0D: {  // float32, big-endian
      unsigned char b[4];
      if (!in.read(reinterpret_cast<char*>(b), 4)) {
        throw ParseError(path.string() + ": truncated IDX data");
      }
      std::uint32_t bits = (std::uint32_t(b[0]) << 24) |
                           (std::uint32_t(b[1]) << 16) |
                           (std::uint32_t(b[2]) << 8) | std::uint32_t(b[3]);
      float f;
      static_assert(sizeof(f) == 4);
      std::memcpy(&f, &bits, 4);
      return static_cast<double>(f);
    }
    case 0x0E: {  // float64, big-endian
      unsigned char b[8];
      if (!in.read(reinterpret_cast<char*>(b), 8)) {
        throw ParseError(path.string() + ": truncated IDX data");
      }
      std::uint64_t bits = 0;
      for (int i = 0; i < 8; ++i) bits = (bits << 8) | b[i];
      double d;
      std::memcpy(&d, &bits, 8);
      return d;
    }
    default:
      throw ParseError(path.string() + ": unsupported IDX dtype " +
                       std::to_string(dtype));
  }
}

}  // namespace

LabeledSpikeDataset load_idx(const std::filesystem::path& data_path,
                             const std::filesystem::path& labels_path,
                             std::size_t time_steps) {
  std::ifstream data_in(data_path, std::ios::binary);
  if (!data_in) throw ParseError("cannot open IDX file: " + data_path.string());
  std::ifstream label_in(labels_path, std::ios::binary);
  if (!label_in) {
    throw ParseError("cannot open IDX file: " + labels_path.string());
  }

  const IdxHeader dh = read_idx_header(data_in, data_path);
  const IdxHeader lh = read_idx_header(label_in, labels_path);
  if (lh.dims.size() != 1) {
    throw ParseError(labels_path.string() + ": label file must be rank 1");
  }
  if (dh.dims.empty() || dh.dims[0] != lh.dims[0]) {
    throw ParseError("IDX sample count mismatch between data and labels");
  }
  const std::size_t count = dh.dims[0];
  if (count == 0) throw ParseError(data_path.string() + ": empty IDX dataset");
  std::size_t dim = 1;
  for (std::size_t i = 1; i < dh.dims.size(); ++i) dim *= dh.dims[i];

  LabeledSpikeDataset ds;
  ds.time_steps = time_steps;
  ds.dim = dim;
  std::size_t max_label = 0;
  std::vector<Vector> rows;
  rows.reserve(count);
  for (std::size_t s = 0; s < count; ++s) {
    Vector x(dim);
    for (std::size_t i = 0; i < dim; ++i) {
      x[i] = read_idx_value(data_in, dh.dtype, data_path);
    }
    rows.push_back(std::move(x));
  }
  std::vector<std::size_t> labels;
  labels.reserve(count);
  for (std::size_t s = 0; s < count; ++s) {
    const double v = read_idx_value(label_in, lh.dtype, labels_path) *
                     (lh.dtype == 0x08 ? 255.0 : 1.0);
    labels.push_back(static_cast<std::size_t>(v));
    max_label = std::max(max_label, labels.back());
  }

  // Non-u8 payloads may fall outside [0,1]; min-max normalize those.
  double lo = rows[0][0], hi = rows[0][0];
  for (const Vector& x : rows) {
    for (double v : x) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  if (lo < 0.0 || hi > 1.0) {
    const double span = hi > lo ? hi - lo : 1.0;
    for (Vector& x : rows) {
      for (double& v : x) v = (v - lo) / span;
    }
  }

  ds.num_classes = max_label + 1;
  ds.samples.reserve(count);
  for (std::size_t s = 0; s < count; ++s) {
    ds.samples.push_back({encode_constant(rows[s], time_steps), labels[s]});
  }
  return ds;
}

}  // namespace glif
