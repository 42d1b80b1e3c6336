// Copyright 2026 The qsw Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Seeded random fixtures for property tests.

#pragma once

#include <random>
#include <vector>

#include "qsw/complex_linalg.hpp"
#include "qsw/signals.hpp"

namespace qsw::test {

inline ComplexMatrix random_matrix(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  ComplexMatrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = Complex{gauss(rng), gauss(rng)};
  return m;
}

inline ComplexMatrix random_hermitian(std::size_t n, std::mt19937_64& rng) {
  const ComplexMatrix a = random_matrix(n, n, rng);
  ComplexMatrix h(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) h(r, c) = 0.5 * (a(r, c) + std::conj(a(c, r)));
  return h;
}

// G G^dag normalized to unit trace: Hermitian and PSD by construction.
inline DensityMatrix random_density(std::size_t n, std::mt19937_64& rng) {
  const ComplexMatrix g = random_matrix(n, n, rng);
  ComplexMatrix rho = matmul(g, adjoint(g));
  const double tr = trace(rho).real();
  rho *= Complex{1.0 / tr, 0.0};
  return DensityMatrix(std::move(rho));
}

inline PureState random_pure(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<Complex> amps(n);
  double norm_sq = 0.0;
  for (Complex& a : amps) {
    a = Complex{gauss(rng), gauss(rng)};
    norm_sq += std::norm(a);
  }
  const double norm = std::sqrt(norm_sq);
  for (Complex& a : amps) a /= norm;
  return PureState(std::move(amps));
}

// Gram-Schmidt on a Gaussian draw; independent of the library's internal
// orthonormalization.
inline ComplexMatrix random_unitary(std::size_t n, std::mt19937_64& rng) {
  ComplexMatrix m = random_matrix(n, n, rng);
  for (std::size_t j = 0; j < n; ++j) {
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t k = 0; k < j; ++k) {
        Complex proj{0.0, 0.0};
        for (std::size_t i = 0; i < n; ++i) proj += std::conj(m(i, k)) * m(i, j);
        for (std::size_t i = 0; i < n; ++i) m(i, j) -= proj * m(i, k);
      }
    }
    double norm_sq = 0.0;
    for (std::size_t i = 0; i < n; ++i) norm_sq += std::norm(m(i, j));
    const double norm = std::sqrt(norm_sq);
    for (std::size_t i = 0; i < n; ++i) m(i, j) /= norm;
  }
  return m;
}

}  // namespace qsw::test
