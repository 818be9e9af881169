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

#ifndef GLIF_LINALG_HPP
#define GLIF_LINALG_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "glif/error.hpp"

namespace glif {

using Vector = std::vector<double>;

// Dense row-major matrix. All layers here are small enough that plain
// loops beat the overhead of a full linear-algebra dependency, and keeping
// the arithmetic explicit makes the backward pass auditable.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, double fill = 0.0)
      : rows(r), cols(c), data(r * c, fill) {}

  double& operator()(std::size_t r, std::size_t c) {
    return data[r * cols + c];
  }
  double operator()(std::size_t r, std::size_t c) const {
    return data[r * cols + c];
  }

  bool same_shape(const Matrix& other) const {
    return rows == other.rows && cols == other.cols;
  }
};

// y = M x
inline Vector matvec(const Matrix& m, const Vector& x) {
  if (x.size() != m.cols) {
    throw ShapeError("matvec: vector length " + std::to_string(x.size()) +
                     " does not match matrix columns " +
                     std::to_string(m.cols));
  }
  Vector y(m.rows, 0.0);
  for (std::size_t r = 0; r < m.rows; ++r) {
    double acc = 0.0;
    const double* row = &m.data[r * m.cols];
    for (std::size_t c = 0; c < m.cols; ++c) acc += row[c] * x[c];
    y[r] = acc;
  }
  return y;
}

// y = M^T x
inline Vector matvec_transposed(const Matrix& m, const Vector& x) {
  if (x.size() != m.rows) {
    throw ShapeError("matvec_transposed: vector length " +
                     std::to_string(x.size()) +
                     " does not match matrix rows " + std::to_string(m.rows));
  }
  Vector y(m.cols, 0.0);
  for (std::size_t r = 0; r < m.rows; ++r) {
    const double xr = x[r];
    const double* row = &m.data[r * m.cols];
    for (std::size_t c = 0; c < m.cols; ++c) y[c] += row[c] * xr;
  }
  return y;
}

// M += a b^T
inline void add_outer(Matrix& m, const Vector& a, const Vector& b) {
  if (a.size() != m.rows || b.size() != m.cols) {
    throw ShapeError("add_outer: outer product shape mismatch");
  }
  for (std::size_t r = 0; r < m.rows; ++r) {
    double* row = &m.data[r * m.cols];
    const double ar = a[r];
    for (std::size_t c = 0; c < m.cols; ++c) row[c] += ar * b[c];
  }
}

}  // namespace glif

#endif  // GLIF_LINALG_HPP
