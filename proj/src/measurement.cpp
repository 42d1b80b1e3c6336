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

#include "qsw/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qsw {

Observable::Observable(ComplexMatrix matrix, double tol) : matrix_(std::move(matrix)) {
  if (!matrix_.is_square()) {
    std::ostringstream os;
    os << "Observable: matrix is " << matrix_.rows() << "x" << matrix_.cols() << ", expected square";
    throw Error(os.str());
  }
  eigen_ = hermitian_eigen(matrix_, tol);  // rejects non-Hermitian input
}

ProjectiveMeasurement::ProjectiveMeasurement(std::vector<ComplexMatrix> projectors,
                                             std::vector<double> outcome_values, double tol)
    : projectors_(std::move(projectors)), outcome_values_(std::move(outcome_values)) {
  if (projectors_.empty()) throw Error("ProjectiveMeasurement: no projectors");
  if (projectors_.size() != outcome_values_.size())
    throw Error("ProjectiveMeasurement: projector and outcome counts differ");
  const std::size_t n = projectors_.front().rows();
  ComplexMatrix sum(n, n);
  for (std::size_t a = 0; a < projectors_.size(); ++a) {
    const ComplexMatrix& p = projectors_[a];
    if (!p.is_square() || p.rows() != n)
      throw Error("ProjectiveMeasurement: projector shape mismatch");
    if (frobenius_distance(matmul(p, p), p) > tol)
      throw Error("ProjectiveMeasurement: projector not idempotent");
    for (std::size_t b = a + 1; b < projectors_.size(); ++b) {
      if (frobenius_norm(matmul(p, projectors_[b])) > tol)
        throw Error("ProjectiveMeasurement: projectors not mutually orthogonal");
    }
    sum += p;
  }
  if (frobenius_distance(sum, ComplexMatrix::identity(n)) > tol)
    throw Error("ProjectiveMeasurement: projectors do not sum to the identity");
  for (std::size_t a = 0; a + 1 < outcome_values_.size(); ++a)
    if (!(outcome_values_[a] < outcome_values_[a + 1]))
      throw Error("ProjectiveMeasurement: outcome values not strictly ascending");
}

namespace {

// Half-open [start, end) index ranges of eigenvalues merged into one outcome.
std::vector<std::pair<std::size_t, std::size_t>> cluster_spectrum(const std::vector<double>& values,
                                                                  double cluster_tol) {
  std::vector<std::pair<std::size_t, std::size_t>> clusters;
  std::size_t start = 0;
  while (start < values.size()) {
    std::size_t end = start + 1;
    while (end < values.size() && values[end] - values[end - 1] <= cluster_tol) ++end;
    clusters.emplace_back(start, end);
    start = end;
  }
  return clusters;
}

}  // namespace

ProjectiveMeasurement projectors_from_observable(const Observable& q, double cluster_tol) {
  const HermitianEigenResult& eig = q.eigen();
  const std::size_t n = q.dim();
  std::vector<ComplexMatrix> projectors;
  std::vector<double> values;
  for (const auto& [start, end] : cluster_spectrum(eig.eigenvalues, cluster_tol)) {
    ComplexMatrix projector(n, n);
    double value = 0.0;
    for (std::size_t k = start; k < end; ++k) {
      value += eig.eigenvalues[k];
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c)
          projector(r, c) += eig.eigenvectors(r, k) * std::conj(eig.eigenvectors(c, k));
    }
    projectors.push_back(std::move(projector));
    values.push_back(value / static_cast<double>(end - start));
  }
  return ProjectiveMeasurement(std::move(projectors), std::move(values));
}

KrausChannel projective_channel(const ProjectiveMeasurement& m) {
  return KrausChannel(std::vector<ComplexMatrix>(m.projectors().begin(), m.projectors().end()));
}

namespace {

void require_same_dim(const DensityMatrix& rho, const ProjectiveMeasurement& m, const char* op) {
  if (rho.dim() != m.dim()) {
    std::ostringstream os;
    os << op << ": signal dimension " << rho.dim() << " vs measurement dimension " << m.dim();
    throw Error(os.str());
  }
}

double clamp01(double p) { return std::min(1.0, std::max(0.0, p)); }

}  // namespace

DensityMatrix measure_nonselective(const DensityMatrix& rho, const ProjectiveMeasurement& m) {
  require_same_dim(rho, m, "measure_nonselective");
  ComplexMatrix out(rho.dim(), rho.dim());
  for (const ComplexMatrix& p : m.projectors()) out += matmul(matmul(p, rho.matrix()), p);
  return DensityMatrix(std::move(out));
}

std::vector<double> outcome_probabilities(const DensityMatrix& rho, const ProjectiveMeasurement& m) {
  require_same_dim(rho, m, "outcome_probabilities");
  std::vector<double> probs;
  probs.reserve(m.outcome_count());
  for (const ComplexMatrix& p : m.projectors())
    probs.push_back(clamp01(trace(matmul(p, rho.matrix())).real()));
  return probs;
}

std::pair<double, DensityMatrix> measure_selective(const DensityMatrix& rho,
                                                   const ProjectiveMeasurement& m,
                                                   std::size_t outcome_index, double tol) {
  require_same_dim(rho, m, "measure_selective");
  if (outcome_index >= m.outcome_count()) {
    std::ostringstream os;
    os << "measure_selective: outcome index " << outcome_index << " out of range, "
       << m.outcome_count() << " outcomes";
    throw Error(os.str());
  }
  const ComplexMatrix& p = m.projectors()[outcome_index];
  const double prob = clamp01(trace(matmul(p, rho.matrix())).real());
  if (prob <= tol) {
    std::ostringstream os;
    os << "measure_selective: zero-probability outcome " << outcome_index
       << "; post-state undefined";
    throw Error(os.str());
  }
  ComplexMatrix conditioned = matmul(matmul(p, rho.matrix()), p);
  conditioned *= Complex{1.0 / prob, 0.0};
  return {prob, DensityMatrix(std::move(conditioned))};
}

GeneralizedMeasurement::GeneralizedMeasurement(DensityMatrix ancilla_state, ComplexMatrix interaction,
                                               Observable ancilla_observable, double tol)
    : ancilla_state_(std::move(ancilla_state)),
      interaction_(std::move(interaction)),
      ancilla_observable_(std::move(ancilla_observable)) {
  if (!interaction_.is_square())
    throw Error("GeneralizedMeasurement: interaction must be square");
  if (interaction_.rows() % ancilla_state_.dim() != 0 ||
      interaction_.rows() / ancilla_state_.dim() == 0) {
    std::ostringstream os;
    os << "GeneralizedMeasurement: interaction dimension " << interaction_.rows()
       << " not a multiple of ancilla dimension " << ancilla_state_.dim();
    throw Error(os.str());
  }
  if (ancilla_observable_.dim() != ancilla_state_.dim()) {
    std::ostringstream os;
    os << "GeneralizedMeasurement: observable dimension " << ancilla_observable_.dim()
       << " vs ancilla dimension " << ancilla_state_.dim();
    throw Error(os.str());
  }
  const double dev = unitarity_deviation(interaction_);
  if (dev > tol) {
    std::ostringstream os;
    os << "GeneralizedMeasurement: interaction not unitary, deviation " << dev;
    throw Error(os.str());
  }
}

MeasurementRecord generalized_measure(const DensityMatrix& rho_a, const GeneralizedMeasurement& gm) {
  if (rho_a.dim() != gm.signal_dim()) {
    std::ostringstream os;
    os << "generalized_measure: signal dimension " << rho_a.dim() << " vs expected "
       << gm.signal_dim();
    throw Error(os.str());
  }
  const std::size_t dim_a = gm.signal_dim();
  const std::size_t dim_b = gm.ancilla_dim();

  const ComplexMatrix joint = kron(rho_a.matrix(), gm.ancilla_state().matrix());
  const ComplexMatrix evolved = matmul(matmul(gm.interaction(), joint), adjoint(gm.interaction()));

  const ProjectiveMeasurement readout = projectors_from_observable(gm.ancilla_observable());
  const ComplexMatrix eye_a = ComplexMatrix::identity(dim_a);

  std::vector<MeasurementRecord::Outcome> outcomes;
  ComplexMatrix nonselective(dim_a, dim_a);
  for (std::size_t k = 0; k < readout.outcome_count(); ++k) {
    const ComplexMatrix lifted = kron(eye_a, readout.projectors()[k]);
    const ComplexMatrix projected = matmul(matmul(lifted, evolved), lifted);
    const ComplexMatrix reduced = partial_trace_matrix(projected, dim_a, dim_b, Subsystem::B);
    const double prob = clamp01(trace(reduced).real());
    nonselective += reduced;

    MeasurementRecord::Outcome outcome{readout.outcome_values()[k], prob, std::nullopt};
    if (prob > 1e-12) {
      ComplexMatrix conditioned = reduced;
      conditioned *= Complex{1.0 / prob, 0.0};
      outcome.post_state = DensityMatrix(std::move(conditioned));
    }
    outcomes.push_back(std::move(outcome));
  }
  return MeasurementRecord{std::move(outcomes), DensityMatrix(std::move(nonselective))};
}

std::vector<PovmEffect> extract_povm_effects(const GeneralizedMeasurement& gm) {
  const std::size_t dim_a = gm.signal_dim();
  const std::size_t dim_b = gm.ancilla_dim();
  const ComplexMatrix& u = gm.interaction();
  const HermitianEigenResult ancilla = hermitian_eigen(gm.ancilla_state().matrix());
  const ProjectiveMeasurement readout = projectors_from_observable(gm.ancilla_observable());
  const HermitianEigenResult& q_eig = gm.ancilla_observable().eigen();

  // Eigenvector columns grouped per clustered outcome, in the same order that
  // projectors_from_observable walks the ascending spectrum.
  const auto clusters = cluster_spectrum(q_eig.eigenvalues, kClusterTolerance);

  std::vector<PovmEffect> effects;
  for (std::size_t k = 0; k < readout.outcome_count(); ++k) {
    ComplexMatrix effect(dim_a, dim_a);
    for (std::size_t col = clusters[k].first; col < clusters[k].second; ++col) {
      for (std::size_t j = 0; j < dim_b; ++j) {
        const double weight = ancilla.eigenvalues[j];
        if (weight <= 1e-12) continue;
        // Branch operator sqrt(l_j) (I (x) <q_col|) U (I (x) |e_j>).
        ComplexMatrix branch(dim_a, dim_a);
        const double root = std::sqrt(weight);
        for (std::size_t a = 0; a < dim_a; ++a)
          for (std::size_t ap = 0; ap < dim_a; ++ap) {
            Complex sum{0.0, 0.0};
            for (std::size_t bn = 0; bn < dim_b; ++bn)
              for (std::size_t bj = 0; bj < dim_b; ++bj)
                sum += std::conj(q_eig.eigenvectors(bn, col)) * u(a * dim_b + bn, ap * dim_b + bj) *
                       ancilla.eigenvectors(bj, j);
            branch(a, ap) = root * sum;
          }
        effect += matmul(adjoint(branch), branch);
      }
    }
    if (frobenius_norm(effect) > 1e-12) {
      effects.push_back(PovmEffect{readout.outcome_values()[k], std::move(effect)});
    }
  }
  return effects;
}

}  // namespace qsw
