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

#include <optional>
#include <vector>

#include "qsw/composite.hpp"
#include "qsw/signals.hpp"
#include "qsw/systems.hpp"

namespace qsw {

/// Eigenvalues closer than this are merged into one measurement outcome.
inline constexpr double kClusterTolerance = 1e-8;

/// A Hermitian operator whose spectrum defines measurement outcomes.
class Observable {
public:
  explicit Observable(ComplexMatrix matrix, double tol = kDefaultTolerance);

  std::size_t dim() const { return matrix_.rows(); }
  const ComplexMatrix& matrix() const { return matrix_; }
  const HermitianEigenResult& eigen() const { return eigen_; }

private:
  ComplexMatrix matrix_;
  HermitianEigenResult eigen_;
};

/// A complete family of mutually orthogonal projectors with one real outcome
/// value each, ordered by ascending value.
class ProjectiveMeasurement {
public:
  ProjectiveMeasurement(std::vector<ComplexMatrix> projectors, std::vector<double> outcome_values,
                        double tol = kDefaultTolerance);

  std::size_t dim() const { return projectors_.front().rows(); }
  std::size_t outcome_count() const { return projectors_.size(); }
  std::span<const ComplexMatrix> projectors() const { return projectors_; }
  std::span<const double> outcome_values() const { return outcome_values_; }

private:
  std::vector<ComplexMatrix> projectors_;
  std::vector<double> outcome_values_;
};

/// Spectral projectors of q, with eigenvalues within cluster_tol merged into
/// a single (possibly degenerate) outcome.
ProjectiveMeasurement projectors_from_observable(const Observable& q,
                                                 double cluster_tol = kClusterTolerance);

/// The projector set viewed as a system: completeness plus idempotence give
/// closure, and applying it equals nonselective measurement.
KrausChannel projective_channel(const ProjectiveMeasurement& m);

/// rho_y = sum_n P_n rho P_n. Idempotent under repetition.
DensityMatrix measure_nonselective(const DensityMatrix& rho, const ProjectiveMeasurement& m);

/// Born-rule probabilities p_n = Tr(P_n rho), clamped to [0, 1], in
/// ascending-outcome order.
std::vector<double> outcome_probabilities(const DensityMatrix& rho, const ProjectiveMeasurement& m);

/// Conditions on one outcome: (p, P rho P / p). Zero-probability outcomes
/// (p <= tol) have no defined post-state and raise an error.
std::pair<double, DensityMatrix> measure_selective(const DensityMatrix& rho,
                                                   const ProjectiveMeasurement& m,
                                                   std::size_t outcome_index, double tol = 1e-12);

/// Ancilla-based measurement: couple the signal to ancilla_state through the
/// unitary interaction, then read the ancilla observable projectively.
class GeneralizedMeasurement {
public:
  GeneralizedMeasurement(DensityMatrix ancilla_state, ComplexMatrix interaction,
                         Observable ancilla_observable, double tol = kDefaultTolerance);

  std::size_t signal_dim() const { return interaction_.rows() / ancilla_state_.dim(); }
  std::size_t ancilla_dim() const { return ancilla_state_.dim(); }
  const DensityMatrix& ancilla_state() const { return ancilla_state_; }
  const ComplexMatrix& interaction() const { return interaction_; }
  const Observable& ancilla_observable() const { return ancilla_observable_; }

private:
  DensityMatrix ancilla_state_;
  ComplexMatrix interaction_;
  Observable ancilla_observable_;
};

/// Everything a measurement produces: per-outcome value, probability and
/// conditional post-state (absent for zero-probability outcomes), plus the
/// probability-weighted nonselective mixture.
struct MeasurementRecord {
  struct Outcome {
    double value;
    double probability;
    std::optional<DensityMatrix> post_state;
  };

  std::vector<Outcome> outcomes;
  DensityMatrix nonselective_state;
};

/// Full generalized-measurement pipeline: tensor with the ancilla, interact,
/// read the ancilla observable, condition and trace the ancilla out.
MeasurementRecord generalized_measure(const DensityMatrix& rho_a, const GeneralizedMeasurement& gm);

/// One POVM effect on the signal space, paired with its outcome value.
struct PovmEffect {
  double value;
  ComplexMatrix effect;
};

/// Effects E_k with Tr(E_k rho) equal to the generalized-measurement outcome
/// probabilities; PSD, summing to the identity. Effects of numerically
/// unreachable outcomes are dropped.
std::vector<PovmEffect> extract_povm_effects(const GeneralizedMeasurement& gm);

}  // namespace qsw
