// Copyright 2026 The svkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SV_MATRIX_H_
#define SV_MATRIX_H_

#include <initializer_list>
#include <vector>

#include "sv/common.h"

namespace sv {

// Dense row-major matrix of doubles. Column vectors are represented as
// n x 1 matrices.
struct Matrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;  // row-major, data.size() == rows * cols

  Matrix() = default;
  Matrix(int r, int c) : rows(r), cols(c), data(static_cast<size_t>(r) * c, 0.0) {
    if (r < 0 || c < 0) throw DimensionError("Matrix: negative dimension");
  }

  static Matrix ColVec(std::vector<double> v) {
    Matrix m;
    m.rows = static_cast<int>(v.size());
    m.cols = 1;
    m.data = std::move(v);
    return m;
  }
  static Matrix ColVec(std::initializer_list<double> v) {
    return ColVec(std::vector<double>(v));
  }
  static Matrix Scalar(double x) {
    Matrix m(1, 1);
    m.data[0] = x;
    return m;
  }

  double& operator()(int r, int c) { return data[static_cast<size_t>(r) * cols + c]; }
  double operator()(int r, int c) const { return data[static_cast<size_t>(r) * cols + c]; }

  int Size() const { return rows * cols; }
  bool IsVector() const { return cols == 1; }
  bool IsScalar() const { return rows == 1 && cols == 1; }
  bool SameShape(const Matrix& other) const {
    return rows == other.rows && cols == other.cols;
  }

  void SetZero() { std::fill(data.begin(), data.end(), 0.0); }
  bool AllFinite() const;
  double MaxAbs() const;
};

// Euclidean norm of all entries.
double Norm(const Matrix& m);
// Sum over elementwise products; shapes must match.
double Dot(const Matrix& a, const Matrix& b);

}  // namespace sv

#endif  // SV_MATRIX_H_
