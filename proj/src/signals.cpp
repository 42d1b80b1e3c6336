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

#include "qsw/signals.hpp"

#include <cmath>
#include <sstream>

namespace qsw {

PureState::PureState(std::vector<Complex> amplitudes) : amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.empty()) throw Error("PureState: amplitude vector is empty");
  double norm_sq = 0.0;
  for (const Complex& a : amplitudes_) {
    if (!std::isfinite(a.real()) || !std::isfinite(a.imag()))
      throw Error("PureState: non-finite amplitude");
    norm_sq += std::norm(a);
  }
  const double norm = std::sqrt(norm_sq);
  if (std::abs(norm - 1.0) > kNormalizationSlack) {
    std::ostringstream os;
    os << "PureState: norm is " << norm << ", more than " << kNormalizationSlack << " away from 1";
    throw Error(os.str());
  }
  if (norm != 1.0) {
    for (Complex& a : amplitudes_) a /= norm;
  }
}

Ensemble::Ensemble(std::vector<Member> members) : members_(std::move(members)) {
  if (members_.empty()) throw Error("Ensemble: no members");
  const std::size_t d = members_.front().state.dim();
  double total = 0.0;
  for (const Member& m : members_) {
    if (m.state.dim() != d) {
      std::ostringstream os;
      os << "Ensemble: member dimension " << m.state.dim() << " differs from " << d;
      throw Error(os.str());
    }
    if (!(m.probability > 0.0) || m.probability > 1.0 + kNormalizationSlack) {
      std::ostringstream os;
      os << "Ensemble: probability " << m.probability << " outside (0, 1]";
      throw Error(os.str());
    }
    total += m.probability;
  }
  if (std::abs(total - 1.0) > kNormalizationSlack) {
    std::ostringstream os;
    os << "Ensemble: probabilities sum to " << total << ", not 1";
    throw Error(os.str());
  }
}

std::string ValidationReport::summary() const {
  std::ostringstream os;
  for (const Check* c : {&hermitian, &unit_trace, &positive_semidefinite, &eigenvalues_at_most_one}) {
    os << c->name << "=" << (c->passed ? "pass" : "FAIL");
    if (!c->passed) os << "(deviation " << c->deviation << ")";
    os << " ";
  }
  std::string s = os.str();
  if (!s.empty()) s.pop_back();
  return s;
}

ValidationReport validate_density(const ComplexMatrix& m, double tol) {
  ValidationReport report;
  if (!m.is_square()) {
    // A non-square candidate fails everything; deviation carries the row/col gap.
    const double gap = std::abs(static_cast<double>(m.rows()) - static_cast<double>(m.cols()));
    report.hermitian = {"hermitian", false, gap};
    report.unit_trace = {"unit_trace", false, gap};
    report.positive_semidefinite = {"psd", false, gap};
    report.eigenvalues_at_most_one = {"eigenvalue_cap", false, gap};
    return report;
  }

  const double asym = hermiticity_deviation(m);
  report.hermitian = {"hermitian", asym <= tol, asym};

  const double trace_dev = std::abs(trace(m) - Complex{1.0, 0.0});
  report.unit_trace = {"unit_trace", trace_dev <= tol, trace_dev};

  // Spectral checks run on the Hermitian part so they stay meaningful even
  // when the hermiticity check already failed.
  ComplexMatrix herm(m.rows(), m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) herm(r, c) = 0.5 * (m(r, c) + std::conj(m(c, r)));
  const HermitianEigenResult eig = hermitian_eigen(herm, /*tol=*/1.0);
  const double min_eig = eig.eigenvalues.front();
  const double max_eig = eig.eigenvalues.back();
  report.positive_semidefinite = {"psd", min_eig >= -tol, min_eig};
  report.eigenvalues_at_most_one = {"eigenvalue_cap", max_eig <= 1.0 + tol, max_eig - 1.0};
  return report;
}

DensityMatrix::DensityMatrix(ComplexMatrix matrix, double tol) : matrix_(std::move(matrix)) {
  const ValidationReport report = validate_density(matrix_, tol);
  if (!report.all_passed()) {
    throw Error("DensityMatrix: validation failed: " + report.summary());
  }
}

DensityMatrix density_from_pure(const PureState& psi) {
  const std::size_t n = psi.dim();
  ComplexMatrix rho(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) rho(r, c) = psi.amplitudes()[r] * std::conj(psi.amplitudes()[c]);
  return DensityMatrix(std::move(rho));
}

DensityMatrix density_from_ensemble(const Ensemble& e) {
  const std::size_t n = e.dim();
  ComplexMatrix rho(n, n);
  for (const Ensemble::Member& m : e.members()) {
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c)
        rho(r, c) += m.probability * m.state.amplitudes()[r] * std::conj(m.state.amplitudes()[c]);
  }
  return DensityMatrix(std::move(rho));
}

double purity(const DensityMatrix& rho) {
  // Tr(rho^2) = sum |rho_ij|^2 for Hermitian rho.
  double sum = 0.0;
  for (const Complex& z : rho.matrix().entries()) sum += std::norm(z);
  return sum;
}

}  // namespace qsw
