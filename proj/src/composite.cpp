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

#include "qsw/composite.hpp"

#include <cmath>
#include <sstream>

namespace qsw {

namespace {

/// Eigenvalues of rho_B below this weight contribute nothing to the reduced
/// dynamics and are dropped from the operator set.
constexpr double kSpectralCutoff = 1e-12;

}  // namespace

CompositeDensity::CompositeDensity(std::size_t dim_a, std::size_t dim_b, DensityMatrix matrix)
    : dim_a_(dim_a), dim_b_(dim_b), density_(std::move(matrix)) {
  if (dim_a_ == 0 || dim_b_ == 0) throw Error("CompositeDensity: subsystem dimensions must be positive");
  if (dim_a_ * dim_b_ != density_.dim()) {
    std::ostringstream os;
    os << "CompositeDensity: " << dim_a_ << "*" << dim_b_ << " != matrix dimension " << density_.dim();
    throw Error(os.str());
  }
}

CompositeDensity tensor_state(const DensityMatrix& rho_a, const DensityMatrix& rho_b) {
  return CompositeDensity(rho_a.dim(), rho_b.dim(),
                          DensityMatrix(kron(rho_a.matrix(), rho_b.matrix())));
}

ComplexMatrix partial_trace_matrix(const ComplexMatrix& m, std::size_t dim_a, std::size_t dim_b,
                                   Subsystem over) {
  if (!m.is_square() || m.rows() != dim_a * dim_b) {
    std::ostringstream os;
    os << "partial_trace: matrix is " << m.rows() << "x" << m.cols() << ", expected "
       << dim_a * dim_b << " square";
    throw Error(os.str());
  }
  if (over == Subsystem::B) {
    ComplexMatrix out(dim_a, dim_a);
    for (std::size_t n = 0; n < dim_a; ++n)
      for (std::size_t i = 0; i < dim_a; ++i) {
        Complex sum{0.0, 0.0};
        for (std::size_t mm = 0; mm < dim_b; ++mm) sum += m(n * dim_b + mm, i * dim_b + mm);
        out(n, i) = sum;
      }
    return out;
  }
  ComplexMatrix out(dim_b, dim_b);
  for (std::size_t mm = 0; mm < dim_b; ++mm)
    for (std::size_t j = 0; j < dim_b; ++j) {
      Complex sum{0.0, 0.0};
      for (std::size_t n = 0; n < dim_a; ++n) sum += m(n * dim_b + mm, n * dim_b + j);
      out(mm, j) = sum;
    }
  return out;
}

DensityMatrix partial_trace(const CompositeDensity& rho_ab, Subsystem over) {
  return DensityMatrix(partial_trace_matrix(rho_ab.matrix(), rho_ab.dim_a(), rho_ab.dim_b(), over));
}

KrausChannel lift_channels(const KrausChannel& ch_a, const KrausChannel& ch_b) {
  std::vector<ComplexMatrix> lifted;
  lifted.reserve(ch_a.kraus().size() * ch_b.kraus().size());
  for (const ComplexMatrix& ma : ch_a.kraus())
    for (const ComplexMatrix& mb : ch_b.kraus()) lifted.push_back(kron(ma, mb));
  return KrausChannel(std::move(lifted));
}

CompositeDensity apply_global_unitary(const ComplexMatrix& u, const CompositeDensity& rho_ab,
                                      double tol) {
  if (!u.is_square() || u.rows() != rho_ab.dim()) {
    std::ostringstream os;
    os << "apply_global_unitary: operator is " << u.rows() << "x" << u.cols()
       << ", composite dimension is " << rho_ab.dim();
    throw Error(os.str());
  }
  const double dev = unitarity_deviation(u);
  if (dev > tol) {
    std::ostringstream os;
    os << "apply_global_unitary: operator not unitary, deviation " << dev;
    throw Error(os.str());
  }
  ComplexMatrix out = matmul(matmul(u, rho_ab.matrix()), adjoint(u));
  return CompositeDensity(rho_ab.dim_a(), rho_ab.dim_b(), DensityMatrix(std::move(out)));
}

ProductCheck is_product_state(const CompositeDensity& rho_ab, double tol) {
  DensityMatrix factor_a = partial_trace(rho_ab, Subsystem::B);
  DensityMatrix factor_b = partial_trace(rho_ab, Subsystem::A);
  const double distance = frobenius_distance(rho_ab.matrix(), kron(factor_a.matrix(), factor_b.matrix()));
  ProductCheck check{distance <= tol, distance, std::nullopt, std::nullopt};
  if (check.is_product) {
    check.factor_a = std::move(factor_a);
    check.factor_b = std::move(factor_b);
  }
  return check;
}

OpenSystemKraus derive_open_system_kraus(const ComplexMatrix& u_ab, const DensityMatrix& rho_b,
                                         double tol) {
  if (!u_ab.is_square()) throw Error("derive_open_system_kraus: interaction must be square");
  const std::size_t dim_b = rho_b.dim();
  if (u_ab.rows() % dim_b != 0) {
    std::ostringstream os;
    os << "derive_open_system_kraus: composite dimension " << u_ab.rows()
       << " not divisible by ancilla dimension " << dim_b;
    throw Error(os.str());
  }
  const std::size_t dim_a = u_ab.rows() / dim_b;
  const double dev = unitarity_deviation(u_ab);
  if (dev > tol) {
    std::ostringstream os;
    os << "derive_open_system_kraus: interaction not unitary, deviation " << dev;
    throw Error(os.str());
  }

  const HermitianEigenResult spectral = hermitian_eigen(rho_b.matrix());
  OpenSystemKraus result;
  result.interaction = u_ab;
  result.ancilla_basis = spectral.eigenvectors;
  for (std::size_t k = 0; k < dim_b; ++k) {
    const double weight = spectral.eigenvalues[k];
    if (weight <= kSpectralCutoff) continue;
    result.ancilla_spectrum.push_back(weight);
    const double root = std::sqrt(weight);
    // Omega_{n,k}[a,a'] = sqrt(l_k) sum_j U[a*Nb + n, a'*Nb + j] e_k[j]
    for (std::size_t n = 0; n < dim_b; ++n) {
      ComplexMatrix omega(dim_a, dim_a);
      for (std::size_t a = 0; a < dim_a; ++a)
        for (std::size_t ap = 0; ap < dim_a; ++ap) {
          Complex sum{0.0, 0.0};
          for (std::size_t j = 0; j < dim_b; ++j)
            sum += u_ab(a * dim_b + n, ap * dim_b + j) * spectral.eigenvectors(j, k);
          omega(a, ap) = root * sum;
        }
      result.operators.push_back(std::move(omega));
    }
  }
  return result;
}

ComplexMatrix apply_open_system(const OpenSystemKraus& os_kraus, const ComplexMatrix& m) {
  if (os_kraus.operators.empty()) throw Error("apply_open_system: empty operator set");
  const std::size_t n = os_kraus.operators.front().rows();
  if (!m.is_square() || m.rows() != n) {
    std::ostringstream os;
    os << "apply_open_system: matrix is " << m.rows() << "x" << m.cols() << ", expected " << n;
    throw Error(os.str());
  }
  ComplexMatrix out(n, n);
  for (const ComplexMatrix& omega : os_kraus.operators)
    out += matmul(matmul(omega, m), adjoint(omega));
  return out;
}

}  // namespace qsw
