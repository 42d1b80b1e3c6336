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

#include "qsw/systems.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace qsw {

KrausChannel::KrausChannel(std::vector<ComplexMatrix> kraus, double closure_tol)
    : kraus_(std::move(kraus)) {
  if (kraus_.empty()) throw Error("KrausChannel: operator set is empty");
  const std::size_t n = kraus_.front().rows();
  for (const ComplexMatrix& m : kraus_) {
    if (!m.is_square() || m.rows() != n) {
      std::ostringstream os;
      os << "KrausChannel: operator is " << m.rows() << "x" << m.cols() << ", expected " << n << "x" << n;
      throw Error(os.str());
    }
  }
  ComplexMatrix closure(n, n);
  for (const ComplexMatrix& m : kraus_) closure += matmul(adjoint(m), m);
  closure_deviation_ = frobenius_distance(closure, ComplexMatrix::identity(n));
  if (closure_deviation_ > closure_tol) {
    std::ostringstream os;
    os << "KrausChannel: closure violated, Frobenius deviation of sum M^dag M from I is "
       << closure_deviation_ << " (tolerance " << closure_tol << ")";
    throw Error(os.str());
  }
}

KrausChannel KrausChannel::identity(std::size_t dim) {
  return KrausChannel({ComplexMatrix::identity(dim)});
}

KrausChannel channel_from_kraus(std::vector<ComplexMatrix> matrices, double tol) {
  return KrausChannel(std::move(matrices), tol);
}

Hamiltonian::Hamiltonian(ComplexMatrix matrix, double tol) : matrix_(std::move(matrix)) {
  if (!matrix_.is_square()) {
    std::ostringstream os;
    os << "Hamiltonian: matrix is " << matrix_.rows() << "x" << matrix_.cols() << ", expected square";
    throw Error(os.str());
  }
  const double asym = hermiticity_deviation(matrix_);
  if (asym > tol) {
    std::ostringstream os;
    os << "Hamiltonian: not Hermitian, max asymmetry " << asym;
    throw Error(os.str());
  }
}

ComplexMatrix apply_to_matrix(const KrausChannel& ch, const ComplexMatrix& m) {
  if (!m.is_square() || m.rows() != ch.dim()) {
    std::ostringstream os;
    os << "apply_to_matrix: matrix is " << m.rows() << "x" << m.cols() << ", channel dimension is "
       << ch.dim();
    throw Error(os.str());
  }
  ComplexMatrix out(ch.dim(), ch.dim());
  for (const ComplexMatrix& k : ch.kraus()) out += matmul(matmul(k, m), adjoint(k));
  return out;
}

DensityMatrix apply_channel(const KrausChannel& ch, const DensityMatrix& rho) {
  if (ch.dim() != rho.dim()) {
    std::ostringstream os;
    os << "apply_channel: channel dimension " << ch.dim() << " vs signal dimension " << rho.dim();
    throw Error(os.str());
  }
  return DensityMatrix(apply_to_matrix(ch, rho.matrix()));
}

KrausChannel compose(const KrausChannel& first, const KrausChannel& second) {
  if (first.dim() != second.dim()) {
    std::ostringstream os;
    os << "compose: dimension mismatch, " << first.dim() << " vs " << second.dim();
    throw Error(os.str());
  }
  std::vector<ComplexMatrix> product;
  product.reserve(first.kraus().size() * second.kraus().size());
  for (const ComplexMatrix& s : second.kraus())
    for (const ComplexMatrix& f : first.kraus()) product.push_back(matmul(s, f));
  return KrausChannel(std::move(product));
}

ComplexMatrix evolution_operator(const Hamiltonian& h, double delta_tau) {
  const HermitianEigenResult eig = hermitian_eigen(h.matrix());
  const std::size_t n = h.dim();
  // V diag(exp(-i w_k dt)) V^dag
  ComplexMatrix scaled = eig.eigenvectors;
  for (std::size_t k = 0; k < n; ++k) {
    const Complex phase = std::exp(Complex{0.0, -eig.eigenvalues[k] * delta_tau});
    for (std::size_t i = 0; i < n; ++i) scaled(i, k) *= phase;
  }
  return matmul(scaled, adjoint(eig.eigenvectors));
}

KrausChannel unitary_from_hamiltonian(const Hamiltonian& h, double delta_tau) {
  return KrausChannel({evolution_operator(h, delta_tau)});
}

namespace {

// True iff m is c*I for some scalar c, to within tol per entry.
bool is_scalar_multiple_of_identity(const ComplexMatrix& m, double tol) {
  const Complex c = trace(m) / static_cast<double>(m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      const Complex expected = (r == j) ? c : Complex{0.0, 0.0};
      if (std::abs(m(r, j) - expected) > tol) return false;
    }
  return true;
}

}  // namespace

bool is_unitary_channel(const KrausChannel& ch, double tol) {
  if (ch.kraus().size() == 1) return unitarity_deviation(ch.kraus()[0]) <= tol;
  // Redundant decompositions of a unitary have every M_mu^dag M_nu scalar.
  for (std::size_t mu = 0; mu < ch.kraus().size(); ++mu)
    for (std::size_t nu = 0; nu < ch.kraus().size(); ++nu)
      if (!is_scalar_multiple_of_identity(matmul(adjoint(ch.kraus()[mu]), ch.kraus()[nu]), tol))
        return false;
  return true;
}

namespace {

// Modified Gram-Schmidt with one re-orthogonalization pass; columns of a
// random Gaussian matrix are well conditioned, so this is machine accurate.
void orthonormalize_columns(ComplexMatrix& m) {
  const std::size_t n = m.rows();
  const std::size_t cols = m.cols();
  for (std::size_t j = 0; j < cols; ++j) {
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
    if (norm < 1e-12) throw Error("orthonormalize_columns: rank-deficient random draw");
    for (std::size_t i = 0; i < n; ++i) m(i, j) /= norm;
  }
}

}  // namespace

KrausChannel random_channel(std::size_t dim, std::size_t kraus_count, std::uint64_t seed) {
  if (dim == 0) throw Error("random_channel: dimension must be positive");
  if (kraus_count < 1 || kraus_count > dim * dim) {
    std::ostringstream os;
    os << "random_channel: kraus_count " << kraus_count << " outside [1, " << dim * dim << "]";
    throw Error(os.str());
  }
  const std::size_t big = dim * kraus_count;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  ComplexMatrix u(big, big);
  for (std::size_t r = 0; r < big; ++r)
    for (std::size_t c = 0; c < big; ++c) u(r, c) = Complex{gauss(rng), gauss(rng)};
  orthonormalize_columns(u);
  // First block-column: K stacked dim x dim blocks, orthonormal columns give
  // closure by construction.
  std::vector<ComplexMatrix> kraus;
  kraus.reserve(kraus_count);
  for (std::size_t block = 0; block < kraus_count; ++block) {
    ComplexMatrix m(dim, dim);
    for (std::size_t r = 0; r < dim; ++r)
      for (std::size_t c = 0; c < dim; ++c) m(r, c) = u(block * dim + r, c);
    kraus.push_back(std::move(m));
  }
  return KrausChannel(std::move(kraus));
}

double channel_distance(const KrausChannel& a, const KrausChannel& b) {
  if (a.dim() != b.dim()) {
    std::ostringstream os;
    os << "channel_distance: dimension mismatch, " << a.dim() << " vs " << b.dim();
    throw Error(os.str());
  }
  const std::size_t n = a.dim();
  double worst = 0.0;
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) {
      ComplexMatrix unit(n, n);
      unit(r, c) = 1.0;
      worst = std::max(worst, frobenius_distance(apply_to_matrix(a, unit), apply_to_matrix(b, unit)));
    }
  return worst;
}

}  // namespace qsw
