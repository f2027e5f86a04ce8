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

#include "parkernel/linalg/eig.hpp"

#include <algorithm>
#include <cmath>

namespace parkernel::linalg {

namespace {

// Diagonal similarity scaling with exact powers of two (classic balancing,
// scaling pass only). Eigenvalues are preserved bit-for-bit up to the mass
// redistribution; diagonal entries are untouched, so trace is unchanged.
void balance_in_place(DenseMatrix& a) {
  const std::size_t n = a.rows();
  const double radix = 2.0;
  const double radix_sq = radix * radix;
  bool converged = false;
  while (!converged) {
    converged = true;
    for (std::size_t i = 0; i < n; ++i) {
      double col = 0.0;
      double row = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        col += std::abs(a(j, i));
        row += std::abs(a(i, j));
      }
      if (col == 0.0 || row == 0.0) continue;
      double factor = 1.0;
      const double total = col + row;
      double target = row / radix;
      while (col < target) {
        factor *= radix;
        col *= radix_sq;
      }
      target = row * radix;
      while (col > target) {
        factor /= radix;
        col /= radix_sq;
      }
      if ((col + row) / factor < 0.95 * total) {
        converged = false;
        const double inv = 1.0 / factor;
        for (std::size_t j = 0; j < n; ++j) a(i, j) *= inv;
        for (std::size_t j = 0; j < n; ++j) a(j, i) *= factor;
      }
    }
  }
}

void hessenberg_in_place(DenseMatrix& h) {
  const std::size_t n = h.rows();
  if (n < 3) return;
  std::vector<double> v(n);
  for (std::size_t k = 0; k + 2 < n; ++k) {
    // Skip columns that already have the Hessenberg shape, leaving them
    // bit-identical (a tridiagonal input passes through untouched).
    double below = 0.0;
    for (std::size_t i = k + 2; i < n; ++i) below += std::abs(h(i, k));
    if (below == 0.0) continue;

    double scale = std::abs(h(k + 1, k)) + below;
    double sumsq = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) {
      v[i] = h(i, k) / scale;
      sumsq += v[i] * v[i];
    }
    double alpha = std::sqrt(sumsq);
    if (v[k + 1] > 0) alpha = -alpha;
    // Householder vector for x - alpha*e1, normalized so that
    // P = I - beta * v * v^T with beta = 1/(alpha*(alpha - x1)).
    const double diff = v[k + 1] - alpha;
    const double beta = 1.0 / (alpha * diff);  // beta < 0; P = I + beta v v^T
    v[k + 1] = diff;

    // P * H : rows k+1..n-1.
    for (std::size_t j = k; j < n; ++j) {
      double dot = 0.0;
      for (std::size_t i = k + 1; i < n; ++i) dot += v[i] * h(i, j);
      dot *= beta;
      for (std::size_t i = k + 1; i < n; ++i) h(i, j) += dot * v[i];
    }
    // H * P : columns k+1..n-1.
    for (std::size_t i = 0; i < n; ++i) {
      double dot = 0.0;
      for (std::size_t j = k + 1; j < n; ++j) dot += h(i, j) * v[j];
      dot *= beta;
      for (std::size_t j = k + 1; j < n; ++j) h(i, j) += dot * v[j];
    }
    h(k + 1, k) = alpha * scale;
    for (std::size_t i = k + 2; i < n; ++i) h(i, k) = 0.0;
  }
}

// Implicit double-shift QR iteration on an upper Hessenberg matrix,
// eigenvalues only. Follows the classic EISPACK/JAMA reduction to quasi-
// triangular form: 1x1 blocks yield real eigenvalues, 2x2 blocks with a
// negative discriminant yield conjugate pairs.
EigenSet hqr_eigenvalues(DenseMatrix& h, double tol, std::size_t max_sweeps) {
  const int size = static_cast<int>(h.rows());
  EigenSet eig;
  eig.reserve(size);
  if (size == 0) return eig;

  double norm = 0.0;
  for (int i = 0; i < size; ++i)
    for (int j = std::max(i - 1, 0); j < size; ++j) norm += std::abs(h(i, j));
  if (norm == 0.0) return EigenSet(size, {0.0, 0.0});

  int n = size - 1;
  double exshift = 0.0;
  int iter = 0;
  std::size_t sweeps = 0;
  double p = 0, q = 0, r = 0, s = 0, z = 0, w = 0, x = 0, y = 0;

  while (n >= 0) {
    // Find the smallest l with a negligible subdiagonal below it.
    int l = n;
    while (l > 0) {
      s = std::abs(h(l - 1, l - 1)) + std::abs(h(l, l));
      if (s == 0.0) s = norm;  // zero-diagonal block: fall back to the matrix norm
      if (std::abs(h(l, l - 1)) <= tol * s) break;
      --l;
    }

    if (l == n) {
      // One real eigenvalue converged.
      eig.emplace_back(h(n, n) + exshift, 0.0);
      --n;
      iter = 0;
    } else if (l == n - 1) {
      // Trailing 2x2 block: real pair or conjugate pair.
      w = h(n, n - 1) * h(n - 1, n);
      p = (h(n - 1, n - 1) - h(n, n)) / 2.0;
      q = p * p + w;
      z = std::sqrt(std::abs(q));
      x = h(n, n) + exshift;
      if (q >= 0) {
        z = (p >= 0) ? p + z : p - z;
        eig.emplace_back(x + z, 0.0);
        eig.emplace_back(z != 0.0 ? x - w / z : x + z, 0.0);
      } else {
        eig.emplace_back(x + p, z);
        eig.emplace_back(x + p, -z);
      }
      n -= 2;
      iter = 0;
    } else {
      if (sweeps >= max_sweeps)
        throw NoConvergence("QR sweep budget of " + std::to_string(max_sweeps) +
                            " exhausted with " + std::to_string(n + 1) +
                            " eigenvalues outstanding");
      ++sweeps;

      // Shift from the trailing 2x2 of the active block.
      x = h(n, n);
      y = h(n - 1, n - 1);
      w = h(n, n - 1) * h(n - 1, n);
      if (iter > 0 && iter % 10 == 0) {
        // Exceptional shift to break symmetric stalls.
        exshift += x;
        for (int i = l; i <= n; ++i) h(i, i) -= x;
        s = std::abs(h(n, n - 1)) + std::abs(h(n - 1, n - 2));
        x = y = 0.75 * s;
        w = -0.4375 * s * s;
      }
      ++iter;

      // Look for two consecutive small subdiagonals to start the sweep.
      int m = n - 2;
      while (m >= l) {
        z = h(m, m);
        r = x - z;
        s = y - z;
        p = (r * s - w) / h(m + 1, m) + h(m, m + 1);
        q = h(m + 1, m + 1) - z - r - s;
        r = h(m + 2, m + 1);
        s = std::abs(p) + std::abs(q) + std::abs(r);
        p /= s;
        q /= s;
        r /= s;
        if (m == l) break;
        if (std::abs(h(m, m - 1)) * (std::abs(q) + std::abs(r)) <
            tol * (std::abs(p) *
                   (std::abs(h(m - 1, m - 1)) + std::abs(z) + std::abs(h(m + 1, m + 1)))))
          break;
        --m;
      }
      for (int i = m + 2; i <= n; ++i) {
        h(i, i - 2) = 0.0;
        if (i > m + 2) h(i, i - 3) = 0.0;
      }

      // Double QR sweep: chase the bulge down rows m..n-1.
      for (int k = m; k <= n - 1; ++k) {
        const bool notlast = (k != n - 1);
        if (k != m) {
          p = h(k, k - 1);
          q = h(k + 1, k - 1);
          r = notlast ? h(k + 2, k - 1) : 0.0;
          x = std::abs(p) + std::abs(q) + std::abs(r);
          if (x == 0.0) continue;
          p /= x;
          q /= x;
          r /= x;
        }
        s = std::sqrt(p * p + q * q + r * r);
        if (p < 0) s = -s;
        if (s == 0.0) continue;
        if (k != m)
          h(k, k - 1) = -s * x;
        else if (l != m)
          h(k, k - 1) = -h(k, k - 1);
        p += s;
        x = p / s;
        y = q / s;
        z = r / s;
        q /= p;
        r /= p;

        for (int j = k; j <= n; ++j) {
          p = h(k, j) + q * h(k + 1, j);
          if (notlast) {
            p += r * h(k + 2, j);
            h(k + 2, j) -= p * z;
          }
          h(k + 1, j) -= p * y;
          h(k, j) -= p * x;
        }
        const int row_end = std::min(n, k + 3);
        for (int i = l; i <= row_end; ++i) {
          p = x * h(i, k) + y * h(i, k + 1);
          if (notlast) {
            p += z * h(i, k + 2);
            h(i, k + 2) -= p * r;
          }
          h(i, k + 1) -= p * q;
          h(i, k) -= p;
        }
      }
    }
  }
  return eig;
}

}  // namespace

void sort_eigenset(EigenSet& e) {
  std::sort(e.begin(), e.end(), [](const std::complex<double>& a, const std::complex<double>& b) {
    const double ma = std::abs(a);
    const double mb = std::abs(b);
    if (ma != mb) return ma > mb;
    if (a.real() != b.real()) return a.real() > b.real();
    return a.imag() > b.imag();
  });
}

DenseMatrix hessenberg(const DenseMatrix& m) {
  if (!m.square())
    throw ShapeMismatch("hessenberg requires a square matrix, got " + std::to_string(m.rows()) +
                        "x" + std::to_string(m.cols()));
  DenseMatrix h = m;
  hessenberg_in_place(h);
  return h;
}

EigenSet eig_qr(const DenseMatrix& m, double tol, std::size_t max_sweeps) {
  if (!m.square())
    throw ShapeMismatch("eig_qr requires a square matrix, got " + std::to_string(m.rows()) + "x" +
                        std::to_string(m.cols()));
  const std::size_t n = m.rows();
  if (n == 0) return {};
  if (max_sweeps == 0) max_sweeps = 100 * n;
  DenseMatrix h = m;
  balance_in_place(h);
  hessenberg_in_place(h);
  EigenSet e = hqr_eigenvalues(h, tol, max_sweeps);
  sort_eigenset(e);
  return e;
}

EigenSet chop(EigenSet e, double eps) {
  for (auto& v : e) {
    double re = std::abs(v.real()) < eps ? 0.0 : v.real();
    double im = std::abs(v.imag()) < eps ? 0.0 : v.imag();
    v = {re, im};
  }
  return e;
}

}  // namespace parkernel::linalg
