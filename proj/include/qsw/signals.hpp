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

#include <string>
#include <vector>

#include "qsw/complex_linalg.hpp"

namespace qsw {

/// Inputs whose norm is within this slack of 1 are silently renormalized;
/// anything further off is rejected.
inline constexpr double kNormalizationSlack = 1e-6;

/// A normalized state vector in the computational basis.
class PureState {
public:
  explicit PureState(std::vector<Complex> amplitudes);

  std::size_t dim() const { return amplitudes_.size(); }
  std::span<const Complex> amplitudes() const { return amplitudes_; }

  friend bool operator==(const PureState& a, const PureState& b) = default;

private:
  std::vector<Complex> amplitudes_;
};

/// A statistical mixture of pure states of equal dimension. Probabilities are
/// in (0, 1] and sum to 1 (within the normalization slack).
class Ensemble {
public:
  struct Member {
    double probability;
    PureState state;

    friend bool operator==(const Member& a, const Member& b) = default;
  };

  explicit Ensemble(std::vector<Member> members);

  std::size_t dim() const { return members_.front().state.dim(); }
  std::span<const Member> members() const { return members_; }

  friend bool operator==(const Ensemble& a, const Ensemble& b) = default;

private:
  std::vector<Member> members_;
};

/// Per-property outcome of validating a candidate density matrix.
struct ValidationReport {
  struct Check {
    std::string name;
    bool passed;
    double deviation;  // how far past the allowed bound the property is
  };

  Check hermitian;
  Check unit_trace;
  Check positive_semidefinite;
  Check eigenvalues_at_most_one;

  bool all_passed() const {
    return hermitian.passed && unit_trace.passed && positive_semidefinite.passed &&
           eigenvalues_at_most_one.passed;
  }
  std::string summary() const;
};

/// Checks hermiticity, unit trace, positive semidefiniteness and the
/// eigenvalue cap of a candidate matrix, reporting measured deviations.
ValidationReport validate_density(const ComplexMatrix& m, double tol = kDefaultTolerance);

/// A validated quantum signal: Hermitian, unit-trace, PSD square matrix.
class DensityMatrix {
public:
  explicit DensityMatrix(ComplexMatrix matrix, double tol = kDefaultTolerance);

  std::size_t dim() const { return matrix_.rows(); }
  const ComplexMatrix& matrix() const { return matrix_; }

  friend bool operator==(const DensityMatrix& a, const DensityMatrix& b) = default;

private:
  ComplexMatrix matrix_;
};

/// Outer product |psi><psi|; the result is idempotent with purity 1.
DensityMatrix density_from_pure(const PureState& psi);

/// rho[n,m] = sum_i p_i x_i[n] conj(x_i[m]).
DensityMatrix density_from_ensemble(const Ensemble& e);

/// Tr(rho^2), in [1/N, 1]; equals 1 exactly for pure signals.
double purity(const DensityMatrix& rho);

}  // namespace qsw
