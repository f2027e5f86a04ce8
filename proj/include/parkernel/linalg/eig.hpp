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

#ifndef PARKERNEL_LINALG_EIG_HPP_
#define PARKERNEL_LINALG_EIG_HPP_

#include <complex>
#include <vector>

#include "parkernel/linalg/matrix.hpp"

namespace parkernel::linalg {

/// Eigenvalue multiset. The deterministic comparison key orders by
/// descending |lambda|, then descending real part, then descending
/// imaginary part; conjugate pairs are adjacent under it.
using EigenSet = std::vector<std::complex<double>>;

/// Sorts in place by the comparison key.
void sort_eigenset(EigenSet& e);

/// Reduces a square matrix to upper Hessenberg form by Householder
/// similarity transforms. Entries below the first subdiagonal are zeroed
/// explicitly; a matrix that is already Hessenberg is returned unchanged.
DenseMatrix hessenberg(const DenseMatrix& m);

/// Eigenvalues of a square real matrix: balancing, Hessenberg reduction,
/// then implicitly shifted QR iteration with deflation (shifts from the
/// trailing 2x2 block, double-shift form for complex pairs).
///
/// `tol` is the relative deflation threshold on subdiagonal entries.
/// `max_sweeps` bounds total QR sweeps; 0 selects the default 100*n.
/// Throws NoConvergence when the budget is exhausted; never returns a
/// partial spectrum.
EigenSet eig_qr(const DenseMatrix& m, double tol = 1e-12, std::size_t max_sweeps = 0);

/// Sets real/imaginary components with magnitude below `eps` to exact zero.
EigenSet chop(EigenSet e, double eps = 1e-10);

}  // namespace parkernel::linalg

#endif  // PARKERNEL_LINALG_EIG_HPP_
