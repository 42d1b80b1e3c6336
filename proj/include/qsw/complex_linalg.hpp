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

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <iosfwd>
#include <span>
#include <vector>

#include "qsw/error.hpp"

namespace qsw {

using Complex = std::complex<double>;

/// Default absolute Frobenius tolerance for comparisons of validated objects.
inline constexpr double kDefaultTolerance = 1e-10;

/// Dense row-major complex matrix. All stored entries are finite; the
/// entry-taking constructors reject NaN/Inf.
class ComplexMatrix {
public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols);
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);
  ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

  static ComplexMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  Complex& operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }

  std::span<const Complex> entries() const { return entries_; }

  ComplexMatrix& operator+=(const ComplexMatrix& other);
  ComplexMatrix& operator-=(const ComplexMatrix& other);
  ComplexMatrix& operator*=(Complex scalar);

  friend bool operator==(const ComplexMatrix& a, const ComplexMatrix& b) = default;

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> entries_;
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator*(Complex scalar, ComplexMatrix m);
ComplexMatrix operator*(ComplexMatrix m, Complex scalar);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

std::ostream& operator<<(std::ostream& os, const ComplexMatrix& m);

/// Standard matrix product; requires a.cols == b.rows.
ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b);

/// Conjugate transpose. An exact involution.
ComplexMatrix adjoint(const ComplexMatrix& a);

/// Sum of diagonal entries; requires a square matrix.
Complex trace(const ComplexMatrix& a);

/// Kronecker product. Block (n, i) of the result equals a(n, i) * b, so the
/// composite row index is k = n * b.rows() + m for subsystem indices (n, m).
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

double frobenius_norm(const ComplexMatrix& a);

/// sqrt(sum |a - b|^2); requires equal shapes.
double frobenius_distance(const ComplexMatrix& a, const ComplexMatrix& b);

/// max_{i,j} |a(i,j) - conj(a(j,i))|, the hermiticity defect. Requires square.
double hermiticity_deviation(const ComplexMatrix& a);

/// max_{i,j} |(u^dag u - I)(i,j)|, the unitarity defect. Requires square.
double unitarity_deviation(const ComplexMatrix& u);

struct HermitianEigenResult {
  std::vector<double> eigenvalues;  // ascending
  ComplexMatrix eigenvectors;       // column k pairs with eigenvalues[k]
};

/// Full eigensystem of a Hermitian matrix via cyclic Jacobi rotations.
/// Rejects inputs whose hermiticity deviation exceeds tol. The returned
/// eigenvector matrix is unitary and V diag(w) V^dag reconstructs the input
/// to roughly machine precision.
HermitianEigenResult hermitian_eigen(const ComplexMatrix& h, double tol = kDefaultTolerance);

}  // namespace qsw
