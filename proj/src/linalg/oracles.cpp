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

#include "parkernel/linalg/oracles.hpp"

#include <cmath>
#include <complex>
#include <numbers>

namespace parkernel::linalg {

namespace {

using Ld = long double;
using Cld = std::complex<Ld>;

void require_charpoly_order(const DenseMatrix& m) {
  if (!m.square())
    throw ShapeMismatch("characteristic polynomial requires a square matrix");
  if (m.rows() > kMaxCharpolyOrder)
    throw OrderTooLarge("characteristic-polynomial route limited to order " +
                        std::to_string(kMaxCharpolyOrder) + ", got " + std::to_string(m.rows()));
}

// Faddeev-LeVerrier in long double. The recurrence cancels terms that grow
// like the power sums of the spectrum, which is exactly why the extra
// precision is needed at order ~12 and spectral radius ~10^2.
std::vector<Ld> faddeev_leverrier(const DenseMatrix& m) {
  const std::size_t n = m.rows();
  std::vector<Ld> a(n * n);
  for (std::size_t i = 0; i < n * n; ++i) a[i] = m.data()[i];

  std::vector<Ld> coeffs(n + 1, 0.0L);
  coeffs[0] = 1.0L;

  std::vector<Ld> work(n * n, 0.0L);  // M_k, starts as identity
  for (std::size_t i = 0; i < n; ++i) work[i * n + i] = 1.0L;

  std::vector<Ld> am(n * n);
  for (std::size_t k = 1; k <= n; ++k) {
    // am = a * work
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        Ld sum = 0.0L;
        for (std::size_t t = 0; t < n; ++t) sum += a[i * n + t] * work[t * n + j];
        am[i * n + j] = sum;
      }
    }
    Ld tr = 0.0L;
    for (std::size_t i = 0; i < n; ++i) tr += am[i * n + i];
    const Ld ck = -tr / static_cast<Ld>(k);
    coeffs[k] = ck;
    work = am;
    for (std::size_t i = 0; i < n; ++i) work[i * n + i] += ck;
  }
  return coeffs;
}

Cld horner(const std::vector<Ld>& coeffs, Cld x) {
  Cld acc = coeffs[0];
  for (std::size_t k = 1; k < coeffs.size(); ++k) acc = acc * x + coeffs[k];
  return acc;
}

// Durand-Kerner simultaneous iteration on a monic polynomial. Starts on an
// asymmetric spiral (symmetric starting sets can cycle on the +/- symmetric
// spectra this oracle is pointed at).
std::vector<Cld> durand_kerner(const std::vector<Ld>& coeffs) {
  const std::size_t n = coeffs.size() - 1;
  std::vector<Cld> roots(n);
  if (n == 0) return roots;

  Ld radius = 0.0L;
  for (std::size_t k = 1; k <= n; ++k)
    radius = std::max(radius, std::pow(std::abs(coeffs[k]), 1.0L / static_cast<Ld>(k)));
  if (radius == 0.0L) return roots;  // p = x^n, every root 0
  radius *= 2.0L;                    // Fujiwara bound on |root|

  const Cld turn(0.4L, 0.9L);
  Cld dir(1.0L, 0.0L);
  for (std::size_t j = 0; j < n; ++j) {
    dir *= turn;
    const Ld mag = radius * (0.3L + 0.6L * static_cast<Ld>(j + 1) / static_cast<Ld>(n));
    roots[j] = dir / std::abs(dir) * mag;
  }

  const int max_iters = 4000;
  const Ld tight = 1e-18L;
  Ld worst = 0.0L;
  for (int it = 0; it < max_iters; ++it) {
    worst = 0.0L;
    for (std::size_t i = 0; i < n; ++i) {
      Cld denom(1.0L, 0.0L);
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        Cld d = roots[i] - roots[j];
        if (d == Cld(0.0L, 0.0L)) d = Cld(1e-30L, 1e-30L);
        denom *= d;
      }
      const Cld delta = horner(coeffs, roots[i]) / denom;
      roots[i] -= delta;
      worst = std::max(worst, std::abs(delta) / (1.0L + std::abs(roots[i])));
    }
    if (worst <= tight) return roots;
  }
  // Multiple roots plateau at their attainable accuracy; accept a stalled
  // cluster, refuse anything coarser.
  if (worst <= 1e-7L) return roots;
  throw NoConvergence("root iteration stalled with relative update " +
                      std::to_string(static_cast<double>(worst)));
}

}  // namespace

std::vector<double> charpoly_coeffs(const DenseMatrix& m) {
  require_charpoly_order(m);
  std::vector<Ld> c = faddeev_leverrier(m);
  return std::vector<double>(c.begin(), c.end());
}

EigenSet oracle_charpoly_eigs(const DenseMatrix& m) {
  require_charpoly_order(m);
  std::vector<Cld> roots = durand_kerner(faddeev_leverrier(m));
  EigenSet e;
  e.reserve(roots.size());
  for (const Cld& r : roots)
    e.emplace_back(static_cast<double>(r.real()), static_cast<double>(r.imag()));
  sort_eigenset(e);
  return e;
}

EigenSet toeplitz_tridiag_eigs(std::size_t n, double diag, double sup, double sub) {
  if (n < 1) throw ShapeMismatch("tridiagonal order must be >= 1");
  const std::complex<double> root = std::sqrt(std::complex<double>(sup * sub, 0.0));
  EigenSet e;
  e.reserve(n);
  for (std::size_t k = 1; k <= n; ++k) {
    const double c = std::cos(static_cast<double>(k) * std::numbers::pi / (static_cast<double>(n) + 1.0));
    e.push_back(std::complex<double>(diag, 0.0) + 2.0 * root * c);
  }
  sort_eigenset(e);
  return e;
}

}  // namespace parkernel::linalg
