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

#include "parkernel/linalg/matrix.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

namespace parkernel::linalg {

namespace {

// Row count below which the parallel product is not worth the fork/join.
constexpr std::size_t kParallelRowCutoff = 64;

void require_square(const DenseMatrix& m, const char* op) {
  if (!m.square())
    throw ShapeMismatch(std::string(op) + " requires a square matrix, got " +
                        std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
}

// Shared ikj kernel: the accumulation order over k is fixed per output
// entry, so partitioning rows across threads cannot change any result bit.
inline void product_rows(const DenseMatrix& a, const DenseMatrix& b, DenseMatrix& c,
                         std::size_t row_begin, std::size_t row_end) {
  const std::size_t n = a.cols();
  const std::size_t p = b.cols();
  const double* bd = b.data().data();
  double* cd = c.data().data();
  for (std::size_t i = row_begin; i < row_end; ++i) {
    double* crow = cd + i * p;
    for (std::size_t k = 0; k < n; ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      const double* brow = bd + k * p;
      for (std::size_t j = 0; j < p; ++j) crow[j] += aik * brow[j];
    }
  }
}

void check_product_shapes(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows())
    throw ShapeMismatch("cannot multiply " + std::to_string(a.rows()) + "x" +
                        std::to_string(a.cols()) + " by " + std::to_string(b.rows()) + "x" +
                        std::to_string(b.cols()));
}

}  // namespace

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows_ * cols_)
    throw ShapeMismatch("entry count " + std::to_string(data_.size()) + " does not match " +
                        std::to_string(rows_) + "x" + std::to_string(cols_));
  for (double d : data_)
    if (!std::isfinite(d)) throw ShapeMismatch("matrix entries must be finite");
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

bool DenseMatrix::operator==(const DenseMatrix& other) const {
  if (rows_ != other.rows_ || cols_ != other.cols_) return false;
  for (std::size_t i = 0; i < data_.size(); ++i)
    if (std::bit_cast<std::uint64_t>(data_[i]) != std::bit_cast<std::uint64_t>(other.data_[i]))
      return false;
  return true;
}

DenseMatrix build_tridiagonal(const TridiagonalSpec& spec) {
  if (spec.n < 1) throw ShapeMismatch("tridiagonal order must be >= 1");
  DenseMatrix m(spec.n, spec.n);
  for (std::size_t i = 0; i < spec.n; ++i) {
    m(i, i) = spec.diag;
    if (i + 1 < spec.n) {
      m(i, i + 1) = spec.sup;
      m(i + 1, i) = spec.sub;
    }
  }
  return m;
}

DenseMatrix mat_mul_serial(const DenseMatrix& a, const DenseMatrix& b) {
  check_product_shapes(a, b);
  DenseMatrix c(a.rows(), b.cols());
  product_rows(a, b, c, 0, a.rows());
  return c;
}

DenseMatrix mat_mul(const DenseMatrix& a, const DenseMatrix& b) {
  check_product_shapes(a, b);
  DenseMatrix c(a.rows(), b.cols());
  const std::size_t rows = a.rows();
#ifdef _OPENMP
  if (rows >= kParallelRowCutoff) {
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(rows); ++i)
      product_rows(a, b, c, static_cast<std::size_t>(i), static_cast<std::size_t>(i) + 1);
    return c;
  }
#endif
  product_rows(a, b, c, 0, rows);
  return c;
}

double trace(const DenseMatrix& m) {
  require_square(m, "trace");
  double t = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i) t += m(i, i);
  return t;
}

double determinant(const DenseMatrix& m) {
  require_square(m, "determinant");
  const std::size_t n = m.rows();
  DenseMatrix a = m;
  double sign = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pivot = k;
    double best = std::abs(a(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      if (std::abs(a(i, k)) > best) {
        best = std::abs(a(i, k));
        pivot = i;
      }
    }
    if (best == 0.0) return 0.0;
    if (pivot != k) {
      for (std::size_t j = k; j < n; ++j) std::swap(a(k, j), a(pivot, j));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      double f = a(i, k) / a(k, k);
      a(i, k) = 0.0;
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= f * a(k, j);
    }
  }
  double det = sign;
  for (std::size_t k = 0; k < n; ++k) det *= a(k, k);
  return det;
}

proto::Value to_value(const DenseMatrix& m) {
  return proto::Value(proto::MatrixData(static_cast<std::uint32_t>(m.rows()),
                                        static_cast<std::uint32_t>(m.cols()), m.data()));
}

DenseMatrix matrix_from_value(const proto::Value& v) {
  const proto::MatrixData& md = v.as_matrix();
  return DenseMatrix(md.rows, md.cols, md.entries);
}

}  // namespace parkernel::linalg
