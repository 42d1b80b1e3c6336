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

#include "qsw/complex_linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <sstream>

namespace qsw {

namespace {

bool entry_finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

void require_all_finite(const std::vector<Complex>& entries) {
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (!entry_finite(entries[i])) {
      std::ostringstream os;
      os << "ComplexMatrix: non-finite entry at flat index " << i;
      throw Error(os.str());
    }
  }
}

std::string shape_string(const ComplexMatrix& m) {
  std::ostringstream os;
  os << m.rows() << "x" << m.cols();
  return os.str();
}

void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(std::string(op) + ": shape mismatch, " + shape_string(a) + " vs " + shape_string(b));
  }
}

}  // namespace

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), entries_(rows * cols, Complex{0.0, 0.0}) {
  if (rows == 0 || cols == 0) throw Error("ComplexMatrix: dimensions must be positive");
}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (rows == 0 || cols == 0) throw Error("ComplexMatrix: dimensions must be positive");
  if (entries_.size() != rows * cols) {
    std::ostringstream os;
    os << "ComplexMatrix: " << entries_.size() << " entries for a " << rows << "x" << cols << " matrix";
    throw Error(os.str());
  }
  require_all_finite(entries_);
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows) {
  rows_ = rows.size();
  if (rows_ == 0) throw Error("ComplexMatrix: dimensions must be positive");
  cols_ = rows.begin()->size();
  if (cols_ == 0) throw Error("ComplexMatrix: dimensions must be positive");
  entries_.reserve(rows_ * cols_);
  for (const auto& row : rows) {
    if (row.size() != cols_) throw Error("ComplexMatrix: ragged initializer rows");
    entries_.insert(entries_.end(), row.begin(), row.end());
  }
  require_all_finite(entries_);
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
  require_same_shape(*this, other, "operator+");
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] += other.entries_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
  require_same_shape(*this, other, "operator-");
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] -= other.entries_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex scalar) {
  for (auto& e : entries_) e *= scalar;
  return *this;
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
ComplexMatrix operator*(Complex scalar, ComplexMatrix m) { return m *= scalar; }
ComplexMatrix operator*(ComplexMatrix m, Complex scalar) { return m *= scalar; }
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) { return matmul(a, b); }

std::ostream& operator<<(std::ostream& os, const ComplexMatrix& m) {
  for (std::size_t r = 0; r < m.rows(); ++r) {
    os << (r == 0 ? "[" : " ");
    for (std::size_t c = 0; c < m.cols(); ++c) {
      const Complex z = m(r, c);
      os << "(" << z.real() << (z.imag() < 0 ? "" : "+") << z.imag() << "i)";
      if (c + 1 < m.cols()) os << " ";
    }
    os << (r + 1 == m.rows() ? "]" : "\n");
  }
  return os;
}

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) {
    throw Error("matmul: dimension mismatch, " + shape_string(a) + " * " + shape_string(b));
  }
  ComplexMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Complex aik = a(i, k);
      if (aik == Complex{0.0, 0.0}) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  }
  return out;
}

ComplexMatrix adjoint(const ComplexMatrix& a) {
  ComplexMatrix out(a.cols(), a.rows());
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) out(c, r) = std::conj(a(r, c));
  return out;
}

Complex trace(const ComplexMatrix& a) {
  if (!a.is_square()) throw Error("trace: matrix is " + shape_string(a) + ", expected square");
  Complex t{0.0, 0.0};
  for (std::size_t i = 0; i < a.rows(); ++i) t += a(i, i);
  return t;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t n = 0; n < a.rows(); ++n)
    for (std::size_t i = 0; i < a.cols(); ++i) {
      const Complex ani = a(n, i);
      for (std::size_t m = 0; m < b.rows(); ++m)
        for (std::size_t j = 0; j < b.cols(); ++j)
          out(n * b.rows() + m, i * b.cols() + j) = ani * b(m, j);
    }
  return out;
}

double frobenius_norm(const ComplexMatrix& a) {
  double sum = 0.0;
  for (const Complex& z : a.entries()) sum += std::norm(z);
  return std::sqrt(sum);
}

double frobenius_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_shape(a, b, "frobenius_distance");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.entries().size(); ++i) sum += std::norm(a.entries()[i] - b.entries()[i]);
  return std::sqrt(sum);
}

double hermiticity_deviation(const ComplexMatrix& a) {
  if (!a.is_square()) throw Error("hermiticity_deviation: matrix is " + shape_string(a) + ", expected square");
  double dev = 0.0;
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) dev = std::max(dev, std::abs(a(r, c) - std::conj(a(c, r))));
  return dev;
}

double unitarity_deviation(const ComplexMatrix& u) {
  if (!u.is_square()) throw Error("unitarity_deviation: matrix is " + shape_string(u) + ", expected square");
  const ComplexMatrix g = matmul(adjoint(u), u);
  double dev = 0.0;
  for (std::size_t r = 0; r < g.rows(); ++r)
    for (std::size_t c = 0; c < g.cols(); ++c) {
      const Complex expected = (r == c) ? Complex{1.0, 0.0} : Complex{0.0, 0.0};
      dev = std::max(dev, std::abs(g(r, c) - expected));
    }
  return dev;
}

namespace {

double offdiag_norm(const ComplexMatrix& a) {
  double sum = 0.0;
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c)
      if (r != c) sum += std::norm(a(r, c));
  return std::sqrt(sum);
}

}  // namespace

HermitianEigenResult hermitian_eigen(const ComplexMatrix& h, double tol) {
  if (!h.is_square()) throw Error("hermitian_eigen: matrix is " + shape_string(h) + ", expected square");
  const double asym = hermiticity_deviation(h);
  if (asym > tol) {
    std::ostringstream os;
    os << "hermitian_eigen: matrix not Hermitian, max asymmetry " << asym << " exceeds tolerance " << tol;
    throw Error(os.str());
  }

  const std::size_t n = h.rows();
  // Work on the exactly-Hermitian average of h and h^dag.
  ComplexMatrix a(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) a(r, c) = 0.5 * (h(r, c) + std::conj(h(c, r)));
  ComplexMatrix v = ComplexMatrix::identity(n);

  const double scale = std::max(1.0, frobenius_norm(a));
  constexpr int kMaxSweeps = 60;
  for (int sweep = 0; sweep < kMaxSweeps && offdiag_norm(a) > 1e-15 * scale; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Complex apq = a(p, q);
        const double r = std::abs(apq);
        if (r <= 1e-300) continue;
        // Phase that makes the 2x2 pivot real, then a classical Jacobi angle.
        const Complex phase = apq / r;
        const double tau = (a(q, q).real() - a(p, p).real()) / (2.0 * r);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(tau * tau + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        // Rotation G: G(p,p)=c, G(p,q)=s, G(q,p)=-s*conj(phase), G(q,q)=c*conj(phase).
        const Complex gqp = -s * std::conj(phase);
        const Complex gqq = c * std::conj(phase);
        // a <- G^dag a G, applied as column then row updates.
        for (std::size_t i = 0; i < n; ++i) {
          const Complex aip = a(i, p), aiq = a(i, q);
          a(i, p) = c * aip + gqp * aiq;
          a(i, q) = s * aip + gqq * aiq;
        }
        for (std::size_t j = 0; j < n; ++j) {
          const Complex apj = a(p, j), aqj = a(q, j);
          a(p, j) = c * apj + std::conj(gqp) * aqj;
          a(q, j) = s * apj + std::conj(gqq) * aqj;
        }
        for (std::size_t i = 0; i < n; ++i) {
          const Complex vip = v(i, p), viq = v(i, q);
          v(i, p) = c * vip + gqp * viq;
          v(i, q) = s * vip + gqq * viq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });

  HermitianEigenResult result;
  result.eigenvalues.resize(n);
  result.eigenvectors = ComplexMatrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    result.eigenvalues[k] = a(order[k], order[k]).real();
    for (std::size_t i = 0; i < n; ++i) result.eigenvectors(i, k) = v(i, order[k]);
  }
  return result;
}

}  // namespace qsw
