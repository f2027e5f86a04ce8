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

#ifndef PARKERNEL_LINALG_ORACLES_HPP_
#define PARKERNEL_LINALG_ORACLES_HPP_

#include "parkernel/linalg/eig.hpp"
#include "parkernel/linalg/matrix.hpp"

// Eigenvalue routes independent of the QR solver, used to cross-check it.

namespace parkernel::linalg {

/// Conditioning limit for the characteristic-polynomial route.
inline constexpr std::size_t kMaxCharpolyOrder = 16;

/// Monic characteristic polynomial coefficients of a square matrix, highest
/// power first ([0] is always 1), via the Faddeev-LeVerrier recurrence in
/// extended precision. Order bound kMaxCharpolyOrder applies.
std::vector<double> charpoly_coeffs(const DenseMatrix& m);

/// Root multiset of det(lambda*I - m): Faddeev-LeVerrier coefficients
/// followed by Durand-Kerner simultaneous root iteration, both in extended
/// precision. Intended for simple (or mildly clustered) spectra; attainable
/// accuracy degrades with root multiplicity. Throws OrderTooLarge above
/// kMaxCharpolyOrder and NoConvergence if the iteration stalls.
EigenSet oracle_charpoly_eigs(const DenseMatrix& m);

/// Closed-form spectrum of the constant tridiagonal matrix
/// (diag, sup, sub): diag + 2*sqrt(sup*sub)*cos(k*pi/(n+1)), k = 1..n,
/// with an imaginary square root when sup*sub < 0.
EigenSet toeplitz_tridiag_eigs(std::size_t n, double diag, double sup, double sub);

}  // namespace parkernel::linalg

#endif  // PARKERNEL_LINALG_ORACLES_HPP_
