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

#pragma once

#include <cstdint>
#include <vector>

#include "qsw/complex_linalg.hpp"
#include "qsw/signals.hpp"

namespace qsw {

/// Closure is checked at this (looser) tolerance on construction, since
/// operator sets typically arrive through text serialization.
inline constexpr double kClosureTolerance = 1e-8;

/// A trace-preserving quantum system: a non-empty set of square operator
/// matrices satisfying sum_mu M_mu^dag M_mu = I.
class KrausChannel {
public:
  explicit KrausChannel(std::vector<ComplexMatrix> kraus, double closure_tol = kClosureTolerance);

  static KrausChannel identity(std::size_t dim);

  std::size_t dim() const { return kraus_.front().rows(); }
  std::span<const ComplexMatrix> kraus() const { return kraus_; }
  /// Frobenius deviation of sum M^dag M from the identity, measured on construction.
  double closure_deviation() const { return closure_deviation_; }

private:
  std::vector<ComplexMatrix> kraus_;
  double closure_deviation_ = 0.0;
};

/// Validating constructor in free-function form.
KrausChannel channel_from_kraus(std::vector<ComplexMatrix> matrices, double tol = kClosureTolerance);

/// An energy observable generating unitary evolution (hbar = 1 convention).
class Hamiltonian {
public:
  explicit Hamiltonian(ComplexMatrix matrix, double tol = kDefaultTolerance);

  std::size_t dim() const { return matrix_.rows(); }
  const ComplexMatrix& matrix() const { return matrix_; }

private:
  ComplexMatrix matrix_;
};

/// sum_mu M_mu m M_mu^dag on an arbitrary square matrix (no validation of m).
ComplexMatrix apply_to_matrix(const KrausChannel& ch, const ComplexMatrix& m);

/// The system's action on a signal: rho_y = sum_mu M_mu rho_x M_mu^dag.
DensityMatrix apply_channel(const KrausChannel& ch, const DensityMatrix& rho);

/// Sequential cascade: the Kraus set of all pairwise products second * first.
KrausChannel compose(const KrausChannel& first, const KrausChannel& second);

/// Single-operator channel U = exp(-i H delta_tau), built spectrally.
KrausChannel unitary_from_hamiltonian(const Hamiltonian& h, double delta_tau);

/// Evolution matrix alone, without the channel wrapper.
ComplexMatrix evolution_operator(const Hamiltonian& h, double delta_tau);

/// True iff the channel is invertible, i.e. admits a single-operator
/// representation: either it has one unitary operator, or every pairwise
/// product M_mu^dag M_nu is a scalar multiple of the identity.
bool is_unitary_channel(const KrausChannel& ch, double tol = kDefaultTolerance);

/// Deterministic random channel: orthonormalizes a seeded complex Gaussian
/// (dim*kraus_count)-square matrix and slices its first block-column into
/// kraus_count operators of size dim. Requires 1 <= kraus_count <= dim^2.
KrausChannel random_channel(std::size_t dim, std::size_t kraus_count, std::uint64_t seed);

/// Largest Frobenius distance between the two channels' outputs over the
/// matrix-unit basis; zero iff the channels act identically on every signal.
double channel_distance(const KrausChannel& a, const KrausChannel& b);

}  // namespace qsw
