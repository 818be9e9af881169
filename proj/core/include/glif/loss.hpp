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

#ifndef GLIF_LOSS_HPP
#define GLIF_LOSS_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "glif/error.hpp"
#include "glif/linalg.hpp"

namespace glif {

// Numerically stable softmax.
inline Vector softmax(const Vector& logits) {
  const double m = *std::max_element(logits.begin(), logits.end());
  Vector p(logits.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    p[i] = std::exp(logits[i] - m);
    sum += p[i];
  }
  for (double& v : p) v /= sum;
  return p;
}

// Cross-entropy of softmax(logits) against a one-hot label.
inline double softmax_cross_entropy(const Vector& logits, std::size_t label) {
  if (label >= logits.size()) {
    throw ShapeError("softmax_cross_entropy: label out of range");
  }
  const double m = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  for (double v : logits) sum += std::exp(v - m);
  return std::log(sum) - (logits[label] - m);
}

// d loss / d logits = softmax(logits) - onehot(label).
inline Vector softmax_cross_entropy_grad(const Vector& logits,
                                         std::size_t label) {
  if (label >= logits.size()) {
    throw ShapeError("softmax_cross_entropy_grad: label out of range");
  }
  Vector g = softmax(logits);
  g[label] -= 1.0;
  return g;
}

// Index of the largest logit; first occurrence wins on ties.
inline std::size_t argmax(const Vector& v) {
  return static_cast<std::size_t>(
      std::distance(v.begin(), std::max_element(v.begin(), v.end())));
}

}  // namespace glif

#endif  // GLIF_LOSS_HPP
