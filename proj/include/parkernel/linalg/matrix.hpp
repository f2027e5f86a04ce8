/* Copyright 2026 The Parkernel Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef PARKERNEL_LINALG_MATRIX_HPP_
#define PARKERNEL_LINALG_MATRIX_HPP_

#include <cstddef>
#include <vector>

#include "parkernel/errors.hpp"
#include "parkernel/value.hpp"

namespace parkernel::linalg {

/// Row-major dense real matrix. Entries are finite binary64; construction
/// from untrusted data goes through the validating constructor.
class DenseMatrix {
 public:
  DenseMatrix() = default;

  /// Zero matrix of the given shape.
  DenseMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

  /// Takes ownership of row-major entries; rejects shape mismatches and
  /// non-finite entries.
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries);

  static DenseMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  const std::vector<double>& data() const { return data_; }
  std::vector<double>& data() { return data_; }

  /// Bitwise structural equality (shape and every entry's binary64 bits).
  bool operator==(const DenseMatrix& other) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Constant-band tridiagonal description: `diag` on the main diagonal,
/// `sup` on (i, i+1), `sub` on (i+1, i).
struct TridiagonalSpec {
  std::size_t n = 1;
  double diag = 0.0;
  double sup = 0.0;
  double sub = 0.0;
};

/// Builds the tridiagonal matrix described by `spec` (order >= 1 enforced).
DenseMatrix build_tridiagonal(const TridiagonalSpec& spec);

/// Dense product; parallelized over output rows when worthwhile. The entry
/// accumulation order is independent of thread count, so the result is
/// bit-identical to mat_mul_serial.
DenseMatrix mat_mul(const DenseMatrix& a, const DenseMatrix& b);

/// Single-threaded reference kernel with the same accumulation order.
DenseMatrix mat_mul_serial(const DenseMatrix& a, const DenseMatrix& b);

double trace(const DenseMatrix& m);

/// Determinant via LU with partial pivoting.
double determinant(const DenseMatrix& m);

// proto::Value boundary conversions. from_value validates shape and
// finiteness of untrusted input.
proto::Value to_value(const DenseMatrix& m);
DenseMatrix matrix_from_value(const proto::Value& v);

}  // namespace parkernel::linalg

#endif  // PARKERNEL_LINALG_MATRIX_HPP_
