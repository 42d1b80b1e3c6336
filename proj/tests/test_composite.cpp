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

#include <doctest.h>

#include <cmath>
#include <random>

#include "qsw/composite.hpp"
#include "support/checks.hpp"
#include "support/oracles.hpp"
#include "support/random_fixtures.hpp"

using namespace qsw;
using namespace qsw::test;

namespace {

ComplexMatrix cnot() {
  return {{1.0, 0.0, 0.0, 0.0},
          {0.0, 1.0, 0.0, 0.0},
          {0.0, 0.0, 0.0, 1.0},
          {0.0, 0.0, 1.0, 0.0}};
}

ComplexMatrix swap_gate() {
  return {{1.0, 0.0, 0.0, 0.0},
          {0.0, 0.0, 1.0, 0.0},
          {0.0, 1.0, 0.0, 0.0},
          {0.0, 0.0, 0.0, 1.0}};
}

// The worked two-qubit input: (alpha|0> + beta|1>) on A, |0> on B.
CompositeDensity coupled_input(double alpha, double beta) {
  const DensityMatrix rho_a = density_from_pure(PureState({alpha, beta}));
  const DensityMatrix rho_b = density_from_pure(PureState({1.0, 0.0}));
  return tensor_state(rho_a, rho_b);
}

// Direct-evolution reference for the reduced dynamics of A.
ComplexMatrix traced_evolution(const ComplexMatrix& u, const DensityMatrix& rho_a,
                               const DensityMatrix& rho_b) {
  const ComplexMatrix joint = naive_kron(rho_a.matrix(), rho_b.matrix());
  const ComplexMatrix evolved = naive_matmul(naive_matmul(u, joint), naive_adjoint(u));
  return partial_trace_matrix(evolved, rho_a.dim(), rho_b.dim(), Subsystem::B);
}

}  // namespace

TEST_CASE("tensor_state") {
  SUBCASE("maximal mixtures combine to the 4-dim maximal mixture") {
    const DensityMatrix half(ComplexMatrix{{0.5, 0.0}, {0.0, 0.5}});
    const CompositeDensity joint = tensor_state(half, half);
    CHECK(max_entry_distance(joint.matrix(), 0.25 * ComplexMatrix::identity(4)) < 1e-15);
  }
  SUBCASE("the worked two-qubit input matrix has rows and columns 1 and 3 zero") {
    const CompositeDensity joint = coupled_input(0.6, 0.8);
    const ComplexMatrix expected{{0.36, 0.0, 0.48, 0.0},
                                 {0.0, 0.0, 0.0, 0.0},
                                 {0.48, 0.0, 0.64, 0.0},
                                 {0.0, 0.0, 0.0, 0.0}};
    CHECK(max_entry_distance(joint.matrix(), expected) < 1e-15);
    CHECK(joint.dim_a() == 2);
    CHECK(joint.dim_b() == 2);
  }
  SUBCASE("|0><0| x |1><1| lands at composite index 1 under k = n*dim_b + m") {
    const CompositeDensity joint = tensor_state(density_from_pure(PureState({1.0, 0.0})),
                                                density_from_pure(PureState({0.0, 1.0})));
    ComplexMatrix expected(4, 4);
    expected(1, 1) = 1.0;
    CHECK(joint.matrix() == expected);
  }
}

TEST_CASE("partial_trace") {
  std::mt19937_64 rng(41);
  SUBCASE("recovers both factors of a product state") {
    const DensityMatrix rho_a = random_density(3, rng);
    const DensityMatrix rho_b = random_density(2, rng);
    const CompositeDensity joint = tensor_state(rho_a, rho_b);
    CHECK(frobenius_distance(partial_trace(joint, Subsystem::B).matrix(), rho_a.matrix()) < 1e-12);
    CHECK(frobenius_distance(partial_trace(joint, Subsystem::A).matrix(), rho_b.matrix()) < 1e-12);
  }
  SUBCASE("the gate output reduces to diag(|alpha|^2, |beta|^2) on A") {
    const CompositeDensity out = apply_global_unitary(cnot(), coupled_input(0.6, 0.8));
    const DensityMatrix reduced = partial_trace(out, Subsystem::B);
    CHECK(max_entry_distance(reduced.matrix(), ComplexMatrix{{0.36, 0.0}, {0.0, 0.64}}) < 1e-14);
  }
  SUBCASE("the balanced gate output reduces to the maximal mixture on B") {
    const double s = 1.0 / std::sqrt(2.0);
    const CompositeDensity out = apply_global_unitary(cnot(), coupled_input(s, s));
    const DensityMatrix reduced = partial_trace(out, Subsystem::A);
    CHECK(max_entry_distance(reduced.matrix(), ComplexMatrix{{0.5, 0.0}, {0.0, 0.5}}) < 1e-14);
  }
}

TEST_CASE("lift_channels") {
  std::mt19937_64 rng(42);
  SUBCASE("identity lifted against identity is the 4-dim identity map") {
    const KrausChannel lifted = lift_channels(KrausChannel::identity(2), KrausChannel::identity(2));
    CHECK(channel_distance(lifted, KrausChannel::identity(4)) < 1e-12);
  }
  SUBCASE("acting on A then tracing out B equals acting on the A factor alone") {
    const double stay = std::sqrt(0.75), flip = std::sqrt(0.25);
    const KrausChannel binary = channel_from_kraus({ComplexMatrix{{stay, 0.0}, {0.0, stay}},
                                                    ComplexMatrix{{0.0, flip}, {0.0, 0.0}},
                                                    ComplexMatrix{{0.0, 0.0}, {flip, 0.0}}});
    const KrausChannel lifted = lift_channels(binary, KrausChannel::identity(2));
    for (int trial = 0; trial < 10; ++trial) {
      const DensityMatrix rho_a = random_density(2, rng);
      const DensityMatrix rho_b = random_density(2, rng);
      const CompositeDensity joint = tensor_state(rho_a, rho_b);
      const ComplexMatrix via_lift = partial_trace_matrix(
          apply_to_matrix(lifted, joint.matrix()), 2, 2, Subsystem::B);
      const ComplexMatrix direct = apply_to_matrix(binary, rho_a.matrix());
      CHECK(frobenius_distance(via_lift, direct) < 1e-10);
    }
  }
  SUBCASE("a lifted local flip moves |00> to |01>") {
    const KrausChannel flip = channel_from_kraus({ComplexMatrix{{0.0, 1.0}, {1.0, 0.0}}});
    const KrausChannel lifted = lift_channels(KrausChannel::identity(2), flip);
    ComplexMatrix zerozero(4, 4);
    zerozero(0, 0) = 1.0;
    ComplexMatrix expected(4, 4);
    expected(1, 1) = 1.0;  // |01> at index 0*2+1
    CHECK(frobenius_distance(apply_to_matrix(lifted, zerozero), expected) < 1e-14);
  }
}

TEST_CASE("apply_global_unitary") {
  SUBCASE("the identity leaves the input untouched") {
    const CompositeDensity in = coupled_input(0.6, 0.8);
    const CompositeDensity out = apply_global_unitary(ComplexMatrix::identity(4), in);
    CHECK(frobenius_distance(out.matrix(), in.matrix()) < 1e-15);
  }
  SUBCASE("the gate sends the worked input to the corner-block output") {
    const CompositeDensity out = apply_global_unitary(cnot(), coupled_input(0.6, 0.8));
    const ComplexMatrix expected{{0.36, 0.0, 0.0, 0.48},
                                 {0.0, 0.0, 0.0, 0.0},
                                 {0.0, 0.0, 0.0, 0.0},
                                 {0.48, 0.0, 0.0, 0.64}};
    CHECK(max_entry_distance(out.matrix(), expected) < 1e-15);
  }
  SUBCASE("basis action: |10> maps to |11>") {
    ComplexMatrix ten(4, 4);
    ten(2, 2) = 1.0;
    const CompositeDensity in(2, 2, DensityMatrix(std::move(ten)));
    const CompositeDensity out = apply_global_unitary(cnot(), in);
    ComplexMatrix expected(4, 4);
    expected(3, 3) = 1.0;
    CHECK(out.matrix() == expected);
  }
  SUBCASE("a non-unitary operator is rejected with its deviation") {
    const CompositeDensity in = coupled_input(0.6, 0.8);
    check_throws_containing([&] { apply_global_unitary(0.5 * ComplexMatrix::identity(4), in); },
                            "not unitary");
  }
}

TEST_CASE("is_product_state") {
  std::mt19937_64 rng(43);
  SUBCASE("tensor products are recognized and factored") {
    const DensityMatrix rho_a = random_density(2, rng);
    const DensityMatrix rho_b = random_density(3, rng);
    const ProductCheck check = is_product_state(tensor_state(rho_a, rho_b));
    CHECK(check.is_product);
    REQUIRE(check.factor_a.has_value());
    REQUIRE(check.factor_b.has_value());
    CHECK(frobenius_distance(check.factor_a->matrix(), rho_a.matrix()) < 1e-12);
    CHECK(frobenius_distance(check.factor_b->matrix(), rho_b.matrix()) < 1e-12);
  }
  SUBCASE("the balanced gate output is entangled with reduced purity 1/2") {
    const double s = 1.0 / std::sqrt(2.0);
    const CompositeDensity out = apply_global_unitary(cnot(), coupled_input(s, s));
    const ProductCheck check = is_product_state(out);
    CHECK_FALSE(check.is_product);
    CHECK(purity(partial_trace(out, Subsystem::B)) == doctest::Approx(0.5).epsilon(1e-10));
  }
  SUBCASE("the degenerate corner alpha = 1 stays a product") {
    const CompositeDensity out = apply_global_unitary(cnot(), coupled_input(1.0, 0.0));
    CHECK(is_product_state(out).is_product);
  }
}

TEST_CASE("derive_open_system_kraus") {
  std::mt19937_64 rng(44);
  SUBCASE("the identity interaction reduces to the identity map for any ancilla") {
    const DensityMatrix rho_b = random_density(3, rng);
    const OpenSystemKraus os = derive_open_system_kraus(ComplexMatrix::identity(6), rho_b);
    for (int trial = 0; trial < 5; ++trial) {
      const DensityMatrix rho_a = random_density(2, rng);
      CHECK(frobenius_distance(apply_open_system(os, rho_a.matrix()), rho_a.matrix()) < 1e-10);
    }
  }
  SUBCASE("the gate with a |0> ancilla acts as the identity on the control") {
    const DensityMatrix ket0 = density_from_pure(PureState({1.0, 0.0}));
    const OpenSystemKraus os = derive_open_system_kraus(cnot(), ket0);
    for (int trial = 0; trial < 20; ++trial) {
      const DensityMatrix rho_a = random_density(2, rng);
      const ComplexMatrix reference = traced_evolution(cnot(), rho_a, ket0);
      CHECK(frobenius_distance(apply_open_system(os, rho_a.matrix()), reference) < 1e-10);
    }
  }
  SUBCASE("swapping against a maximal mixture depolarizes completely") {
    const DensityMatrix half(ComplexMatrix{{0.5, 0.0}, {0.0, 0.5}});
    const OpenSystemKraus os = derive_open_system_kraus(swap_gate(), half);
    for (int trial = 0; trial < 5; ++trial) {
      const DensityMatrix rho_a = random_density(2, rng);
      const ComplexMatrix out = apply_open_system(os, rho_a.matrix());
      CHECK(max_entry_distance(out, ComplexMatrix{{0.5, 0.0}, {0.0, 0.5}}) < 1e-12);
      // And the direct-evolution oracle agrees.
      CHECK(frobenius_distance(out, traced_evolution(swap_gate(), rho_a, half)) < 1e-12);
    }
  }
  SUBCASE("non-unitary interactions are rejected") {
    const DensityMatrix half(ComplexMatrix{{0.5, 0.0}, {0.0, 0.5}});
    check_throws_containing(
        [&] { derive_open_system_kraus(0.7 * ComplexMatrix::identity(4), half); }, "not unitary");
  }
  SUBCASE("zero-weight ancilla branches are dropped for rank-deficient states") {
    std::mt19937_64 inner_rng(441);
    const DensityMatrix pure_b = density_from_pure(random_pure(2, inner_rng));  // rank 1
    const ComplexMatrix u = random_unitary(6, inner_rng);
    const OpenSystemKraus os = derive_open_system_kraus(u, pure_b);
    CHECK(os.operators.size() == 2);  // dim_b * rank(rho_b)
    CHECK(os.ancilla_spectrum.size() == 1);
    for (int trial = 0; trial < 5; ++trial) {
      const DensityMatrix rho_a = random_density(3, inner_rng);
      CHECK(frobenius_distance(apply_open_system(os, rho_a.matrix()),
                               traced_evolution(u, rho_a, pure_b)) < 1e-10);
    }
  }
}

// --- module invariants ------------------------------------------------------

TEST_CASE("reduced dynamics agree with direct evolution plus partial trace") {
  std::mt19937_64 rng(45);
  const std::size_t dims[] = {2, 3, 4};
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t na = dims[trial % 3];
    const std::size_t nb = dims[(trial / 3) % 3];
    const ComplexMatrix u = random_unitary(na * nb, rng);
    const DensityMatrix rho_b = random_density(nb, rng);
    const DensityMatrix rho_a = random_density(na, rng);

    const OpenSystemKraus os = derive_open_system_kraus(u, rho_b);
    CHECK(os.operators.size() <= nb * nb);

    ComplexMatrix closure(na, na);
    for (const ComplexMatrix& omega : os.operators) closure += matmul(adjoint(omega), omega);
    CHECK(frobenius_distance(closure, ComplexMatrix::identity(na)) < 1e-9);

    CHECK(frobenius_distance(apply_open_system(os, rho_a.matrix()),
                             traced_evolution(u, rho_a, rho_b)) < 1e-9);
  }
}

TEST_CASE("partial_trace preserves trace and validity") {
  std::mt19937_64 rng(46);
  for (int trial = 0; trial < 20; ++trial) {
    const DensityMatrix joint = random_density(6, rng);
    const CompositeDensity composite(2, 3, joint);
    for (const Subsystem over : {Subsystem::A, Subsystem::B}) {
      const DensityMatrix reduced = partial_trace(composite, over);
      CHECK(std::abs(trace(reduced.matrix()).real() - 1.0) < 1e-12);
      CHECK(validate_density(reduced.matrix()).all_passed());
    }
  }
}

TEST_CASE("partial trace is adjoint to tensoring with the identity") {
  std::mt19937_64 rng(47);
  for (int trial = 0; trial < 20; ++trial) {
    const DensityMatrix joint = random_density(6, rng);
    const CompositeDensity composite(3, 2, joint);
    const ComplexMatrix x = random_hermitian(3, rng);
    const Complex lhs = trace(matmul(kron(x, ComplexMatrix::identity(2)), composite.matrix()));
    const Complex rhs = trace(matmul(x, partial_trace(composite, Subsystem::B).matrix()));
    CHECK(std::abs(lhs - rhs) < 1e-11);
  }
}

TEST_CASE("tensor products always pass the product test") {
  std::mt19937_64 rng(48);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t na = 2 + trial % 3;
    const std::size_t nb = 2 + (trial / 3) % 3;
    const CompositeDensity joint = tensor_state(random_density(na, rng), random_density(nb, rng));
    CHECK(is_product_state(joint).is_product);
  }
}

TEST_CASE("4x4 subsystems validate and reduce at the 16-dim composite size") {
  std::mt19937_64 rng(49);
  const DensityMatrix rho_a = random_density(4, rng);
  const DensityMatrix rho_b = random_density(4, rng);
  const CompositeDensity joint = tensor_state(rho_a, rho_b);  // 16x16, fully validated
  CHECK(joint.dim() == 16);
  CHECK(frobenius_distance(partial_trace(joint, Subsystem::B).matrix(), rho_a.matrix()) < 1e-12);
  CHECK(is_product_state(joint).is_product);
}
