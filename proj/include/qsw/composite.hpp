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

#include "qsw/signals.hpp"
#include "qsw/systems.hpp"

namespace qsw {

enum class Subsystem { A, B };

/// A signal on a two-subsystem space. Composite index k = n * dim_b + m for
/// subsystem indices (n on A, m on B), both 0-based.
class CompositeDensity {
public:
  CompositeDensity(std::size_t dim_a, std::size_t dim_b, DensityMatrix matrix);

  std::size_t dim_a() const { return dim_a_; }
  std::size_t dim_b() const { return dim_b_; }
  std::size_t dim() const { return density_.dim(); }
  const DensityMatrix& density() const { return density_; }
  const ComplexMatrix& matrix() const { return density_.matrix(); }

private:
  std::size_t dim_a_;
  std::size_t dim_b_;
  DensityMatrix density_;
};

/// Uncorrelated pairing of two signals: kron(rho_a, rho_b).
CompositeDensity tensor_state(const DensityMatrix& rho_a, const DensityMatrix& rho_b);

/// Discards one subsystem: over B gives rho_A[n,i] = sum_m rho[n,m;i,m],
/// over A gives rho_B[m,j] = sum_n rho[n,m;n,j].
DensityMatrix partial_trace(const CompositeDensity& rho_ab, Subsystem over);

/// Partial trace on a raw composite matrix (no density validation of input
/// or output); used where intermediate operators are not valid signals.
ComplexMatrix partial_trace_matrix(const ComplexMatrix& m, std::size_t dim_a, std::size_t dim_b,
                                   Subsystem over);

/// Tensor lift of two local systems: the Kraus set {kron(M_mu, M'_nu)}.
KrausChannel lift_channels(const KrausChannel& ch_a, const KrausChannel& ch_b);

/// U rho U^dag with a unitarity check on u.
CompositeDensity apply_global_unitary(const ComplexMatrix& u, const CompositeDensity& rho_ab,
                                      double tol = kDefaultTolerance);

/// Outcome of testing whether a composite factors as Tr_B(rho) (x) Tr_A(rho).
struct ProductCheck {
  bool is_product;
  double distance;  // Frobenius distance to the reduced-factor product
  std::optional<DensityMatrix> factor_a;
  std::optional<DensityMatrix> factor_b;
};

ProductCheck is_product_state(const CompositeDensity& rho_ab, double tol = kDefaultTolerance);

/// Reduced dynamics of subsystem A when AB evolves unitarily from an
/// uncorrelated start rho_A (x) rho_B: operators Omega with
/// sum Omega rho_A Omega^dag = Tr_B{ U (rho_A (x) rho_B) U^dag }.
/// Carries the construction inputs: the interaction used and the spectral
/// decomposition of rho_B (eigenvalues kept, full eigenbasis).
struct OpenSystemKraus {
  std::vector<ComplexMatrix> operators;
  ComplexMatrix interaction;             // the U_AB used
  std::vector<double> ancilla_spectrum;  // eigenvalues of rho_B kept in the construction
  ComplexMatrix ancilla_basis;           // eigenvector columns of rho_B
};

/// Stinespring-style slices Omega_{n,k} = sqrt(l_k) (I (x) <b_n|) U (I (x) |e_k>)
/// over the spectral decomposition rho_B = sum_k l_k |e_k><e_k|; eigenvalues
/// below 1e-12 are dropped.
OpenSystemKraus derive_open_system_kraus(const ComplexMatrix& u_ab, const DensityMatrix& rho_b,
                                         double tol = kDefaultTolerance);

/// sum_n Omega_n m Omega_n^dag.
ComplexMatrix apply_open_system(const OpenSystemKraus& os_kraus, const ComplexMatrix& m);

}  // namespace qsw
