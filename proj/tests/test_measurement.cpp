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

#include "qsw/measurement.hpp"
#include "support/checks.hpp"
#include "support/oracles.hpp"
#include "support/random_fixtures.hpp"

using namespace qsw;
using namespace qsw::test;

namespace {

Observable sigma_z() { return Observable(ComplexMatrix{{1.0, 0.0}, {0.0, -1.0}}); }
Observable sigma_x() { return Observable(ComplexMatrix{{0.0, 1.0}, {1.0, 0.0}}); }

ComplexMatrix cnot() {
  return {{1.0, 0.0, 0.0, 0.0},
          {0.0, 1.0, 0.0, 0.0},
          {0.0, 0.0, 0.0, 1.0},
          {0.0, 0.0, 1.0, 0.0}};
}

DensityMatrix ket0() { return density_from_pure(PureState({1.0, 0.0})); }

}  // namespace

TEST_CASE("projectors_from_observable") {
  SUBCASE("a diagonal observable splits into basis projectors, ascending") {
    const ProjectiveMeasurement m = projectors_from_observable(sigma_z());
    REQUIRE(m.outcome_count() == 2);
    CHECK(m.outcome_values()[0] == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(m.outcome_values()[1] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(max_entry_distance(m.projectors()[0], ComplexMatrix{{0.0, 0.0}, {0.0, 1.0}}) < 1e-12);
    CHECK(max_entry_distance(m.projectors()[1], ComplexMatrix{{1.0, 0.0}, {0.0, 0.0}}) < 1e-12);
  }
  SUBCASE("a fully degenerate observable collapses to one outcome") {
    const ProjectiveMeasurement m = projectors_from_observable(Observable(ComplexMatrix::identity(2)));
    REQUIRE(m.outcome_count() == 1);
    CHECK(m.outcome_values()[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(max_entry_distance(m.projectors()[0], ComplexMatrix::identity(2)) < 1e-12);
  }
  SUBCASE("the flip observable yields the +-(1,1)/sqrt(2) projectors") {
    const ProjectiveMeasurement m = projectors_from_observable(sigma_x());
    REQUIRE(m.outcome_count() == 2);
    CHECK(max_entry_distance(m.projectors()[0], ComplexMatrix{{0.5, -0.5}, {-0.5, 0.5}}) < 1e-12);
    CHECK(max_entry_distance(m.projectors()[1], ComplexMatrix{{0.5, 0.5}, {0.5, 0.5}}) < 1e-12);
  }
  SUBCASE("a partially degenerate spectrum merges into a rank-2 projector") {
    const Observable q(ComplexMatrix{{2.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}});
    const ProjectiveMeasurement m = projectors_from_observable(q);
    REQUIRE(m.outcome_count() == 2);
    CHECK(m.outcome_values()[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(m.outcome_values()[1] == doctest::Approx(2.0).epsilon(1e-14));
    const ComplexMatrix plane{{0.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}};
    CHECK(max_entry_distance(m.projectors()[0], plane) < 1e-12);
    CHECK(trace(m.projectors()[0]).real() == doctest::Approx(2.0).epsilon(1e-12));
  }
}

TEST_CASE("measure_nonselective") {
  SUBCASE("a state already diagonal in the measurement basis is unchanged") {
    const DensityMatrix rho(ComplexMatrix{{0.3, 0.0}, {0.0, 0.7}});
    const DensityMatrix out = measure_nonselective(rho, projectors_from_observable(sigma_z()));
    CHECK(frobenius_distance(out.matrix(), rho.matrix()) < 1e-15);
  }
  SUBCASE("measuring |+> in the z basis erases the off-diagonals") {
    const DensityMatrix plus(ComplexMatrix{{0.5, 0.5}, {0.5, 0.5}});
    const DensityMatrix out = measure_nonselective(plus, projectors_from_observable(sigma_z()));
    CHECK(max_entry_distance(out.matrix(), ComplexMatrix{{0.5, 0.0}, {0.0, 0.5}}) < 1e-12);
  }
  SUBCASE("the (0.6, 0.8) state decoheres to diag(0.36, 0.64)") {
    const DensityMatrix rho = density_from_pure(PureState({0.6, 0.8}));
    const DensityMatrix out = measure_nonselective(rho, projectors_from_observable(sigma_z()));
    CHECK(max_entry_distance(out.matrix(), ComplexMatrix{{0.36, 0.0}, {0.0, 0.64}}) < 1e-12);
  }
}

TEST_CASE("outcome_probabilities") {
  const ProjectiveMeasurement mz = projectors_from_observable(sigma_z());
  SUBCASE("|0> gives (0, 1) in ascending outcome order") {
    const std::vector<double> p = outcome_probabilities(ket0(), mz);
    REQUIRE(p.size() == 2);
    CHECK(p[0] == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(p[1] == doctest::Approx(1.0).epsilon(1e-14));
  }
  SUBCASE("the maximal mixture is an even split for any binary measurement") {
    const DensityMatrix half(ComplexMatrix{{0.5, 0.0}, {0.0, 0.5}});
    for (const Observable& q : {sigma_z(), sigma_x()}) {
      const std::vector<double> p = outcome_probabilities(half, projectors_from_observable(q));
      CHECK(p[0] == doctest::Approx(0.5).epsilon(1e-12));
      CHECK(p[1] == doctest::Approx(0.5).epsilon(1e-12));
    }
  }
  SUBCASE("the (0.6, 0.8) state gives (0.64, 0.36), ascending") {
    const std::vector<double> p =
        outcome_probabilities(density_from_pure(PureState({0.6, 0.8})), mz);
    CHECK(p[0] == doctest::Approx(0.64).epsilon(1e-12));
    CHECK(p[1] == doctest::Approx(0.36).epsilon(1e-12));
  }
}

TEST_CASE("measure_selective") {
  const ProjectiveMeasurement mz = projectors_from_observable(sigma_z());
  SUBCASE("conditioning |0> on its certain outcome returns it unchanged") {
    const auto [p, post] = measure_selective(ket0(), mz, 1);  // outcome +1
    CHECK(p == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(frobenius_distance(post.matrix(), ket0().matrix()) < 1e-12);
  }
  SUBCASE("conditioning on an impossible outcome is an error") {
    check_throws_containing([&] { measure_selective(ket0(), mz, 0); }, "zero-probability");
  }
  SUBCASE("|+> conditions to either basis projector with probability 1/2") {
    const DensityMatrix plus(ComplexMatrix{{0.5, 0.5}, {0.5, 0.5}});
    const auto [p0, post0] = measure_selective(plus, mz, 0);
    const auto [p1, post1] = measure_selective(plus, mz, 1);
    CHECK(p0 == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(p1 == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(max_entry_distance(post0.matrix(), ComplexMatrix{{0.0, 0.0}, {0.0, 1.0}}) < 1e-12);
    CHECK(max_entry_distance(post1.matrix(), ComplexMatrix{{1.0, 0.0}, {0.0, 0.0}}) < 1e-12);
  }
  SUBCASE("the probability-weighted mixture reproduces the nonselective result") {
    std::mt19937_64 rng(51);
    for (int trial = 0; trial < 20; ++trial) {
      const DensityMatrix rho = random_density(2, rng);
      ComplexMatrix mixture(2, 2);
      for (std::size_t k = 0; k < mz.outcome_count(); ++k) {
        const auto [p, post] = measure_selective(rho, mz, k);
        mixture += Complex{p, 0.0} * post.matrix();
      }
      CHECK(frobenius_distance(mixture, measure_nonselective(rho, mz).matrix()) < 1e-12);
    }
  }
}

TEST_CASE("generalized_measure") {
  SUBCASE("no interaction means no information and no disturbance") {
    std::mt19937_64 rng(52);
    const DensityMatrix rho_a = random_density(2, rng);
    const GeneralizedMeasurement gm(ket0(), ComplexMatrix::identity(4), sigma_z());
    const MeasurementRecord record = generalized_measure(rho_a, gm);
    REQUIRE(record.outcomes.size() == 2);
    // Ancilla stays |0>: the -1 outcome is unreachable, +1 is certain.
    CHECK(record.outcomes[0].probability == doctest::Approx(0.0).epsilon(1e-14));
    CHECK_FALSE(record.outcomes[0].post_state.has_value());
    CHECK(record.outcomes[1].probability == doctest::Approx(1.0).epsilon(1e-12));
    REQUIRE(record.outcomes[1].post_state.has_value());
    CHECK(frobenius_distance(record.outcomes[1].post_state->matrix(), rho_a.matrix()) < 1e-10);
    CHECK(frobenius_distance(record.nonselective_state.matrix(), rho_a.matrix()) < 1e-10);
  }
  SUBCASE("the gate readout reproduces a z measurement on the signal") {
    const DensityMatrix rho_a = density_from_pure(PureState({0.6, 0.8}));
    const GeneralizedMeasurement gm(ket0(), cnot(), sigma_z());
    const MeasurementRecord record = generalized_measure(rho_a, gm);
    REQUIRE(record.outcomes.size() == 2);
    // Ascending: -1 first, reached when the ancilla reads |1|, i.e. p = 0.64.
    CHECK(record.outcomes[0].value == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(record.outcomes[0].probability == doctest::Approx(0.64).epsilon(1e-10));
    CHECK(record.outcomes[1].probability == doctest::Approx(0.36).epsilon(1e-10));
    REQUIRE(record.outcomes[0].post_state.has_value());
    REQUIRE(record.outcomes[1].post_state.has_value());
    CHECK(max_entry_distance(record.outcomes[0].post_state->matrix(),
                             ComplexMatrix{{0.0, 0.0}, {0.0, 1.0}}) < 1e-10);
    CHECK(max_entry_distance(record.outcomes[1].post_state->matrix(),
                             ComplexMatrix{{1.0, 0.0}, {0.0, 0.0}}) < 1e-10);
    // The nonselective mixture equals the z-decohered signal.
    CHECK(max_entry_distance(record.nonselective_state.matrix(),
                             ComplexMatrix{{0.36, 0.0}, {0.0, 0.64}}) < 1e-10);
  }
  SUBCASE("record invariants hold for random setups") {
    std::mt19937_64 rng(53);
    for (int trial = 0; trial < 20; ++trial) {
      const std::size_t na = 2 + trial % 2;
      const std::size_t nb = 2 + (trial / 2) % 2;
      const GeneralizedMeasurement gm(random_density(nb, rng), random_unitary(na * nb, rng),
                                      Observable(random_hermitian(nb, rng)));
      const DensityMatrix rho_a = random_density(na, rng);
      const MeasurementRecord record = generalized_measure(rho_a, gm);

      double total = 0.0;
      ComplexMatrix mixture(na, na);
      for (const auto& outcome : record.outcomes) {
        total += outcome.probability;
        if (outcome.post_state)
          mixture += Complex{outcome.probability, 0.0} * outcome.post_state->matrix();
      }
      CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(frobenius_distance(mixture, record.nonselective_state.matrix()) < 1e-10);

      // Nonselective output equals direct evolution plus partial trace.
      const ComplexMatrix joint = naive_kron(rho_a.matrix(), gm.ancilla_state().matrix());
      const ComplexMatrix evolved =
          naive_matmul(naive_matmul(gm.interaction(), joint), naive_adjoint(gm.interaction()));
      const ComplexMatrix reference = partial_trace_matrix(evolved, na, nb, Subsystem::B);
      CHECK(frobenius_distance(record.nonselective_state.matrix(), reference) < 1e-10);
    }
  }
}

TEST_CASE("extract_povm_effects") {
  SUBCASE("no interaction leaves a single identity effect") {
    const GeneralizedMeasurement gm(ket0(), ComplexMatrix::identity(4), sigma_z());
    const std::vector<PovmEffect> effects = extract_povm_effects(gm);
    REQUIRE(effects.size() == 1);  // the unreachable outcome is dropped
    CHECK(effects[0].value == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(max_entry_distance(effects[0].effect, ComplexMatrix::identity(2)) < 1e-10);
  }
  SUBCASE("the gate readout extracts the basis-projector effects") {
    const GeneralizedMeasurement gm(ket0(), cnot(), sigma_z());
    const std::vector<PovmEffect> effects = extract_povm_effects(gm);
    REQUIRE(effects.size() == 2);
    CHECK(max_entry_distance(effects[0].effect, ComplexMatrix{{0.0, 0.0}, {0.0, 1.0}}) < 1e-10);
    CHECK(max_entry_distance(effects[1].effect, ComplexMatrix{{1.0, 0.0}, {0.0, 0.0}}) < 1e-10);
  }
  SUBCASE("effect traces match pipeline probabilities on random signals") {
    std::mt19937_64 rng(54);
    for (int trial = 0; trial < 10; ++trial) {
      const GeneralizedMeasurement gm(random_density(2, rng), random_unitary(4, rng),
                                      Observable(random_hermitian(2, rng)));
      const std::vector<PovmEffect> effects = extract_povm_effects(gm);
      for (int inner = 0; inner < 5; ++inner) {
        const DensityMatrix rho = random_density(2, rng);
        const MeasurementRecord record = generalized_measure(rho, gm);
        for (const PovmEffect& e : effects) {
          // Match by outcome value.
          for (const auto& outcome : record.outcomes) {
            if (std::abs(outcome.value - e.value) < 1e-9) {
              CHECK(trace(matmul(e.effect, rho.matrix())).real() ==
                    doctest::Approx(outcome.probability).epsilon(1e-10));
            }
          }
        }
      }
    }
  }
}

// --- module invariants ------------------------------------------------------

TEST_CASE("nonselective measurement is idempotent") {
  std::mt19937_64 rng(55);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 2 + trial % 4;
    const ProjectiveMeasurement m = projectors_from_observable(Observable(random_hermitian(n, rng)));
    const DensityMatrix rho = random_density(n, rng);
    const DensityMatrix once = measure_nonselective(rho, m);
    const DensityMatrix twice = measure_nonselective(once, m);
    CHECK(frobenius_distance(once.matrix(), twice.matrix()) < 1e-12);
  }
}

TEST_CASE("a projective measurement is itself a valid system") {
  std::mt19937_64 rng(56);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + trial % 4;
    const ProjectiveMeasurement m = projectors_from_observable(Observable(random_hermitian(n, rng)));
    const KrausChannel ch = projective_channel(m);  // closure from completeness
    const DensityMatrix rho = random_density(n, rng);
    CHECK(frobenius_distance(apply_channel(ch, rho).matrix(),
                             measure_nonselective(rho, m).matrix()) < 1e-12);
  }
}

TEST_CASE("probabilities always sum to one") {
  std::mt19937_64 rng(57);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 2 + trial % 5;
    const ProjectiveMeasurement m = projectors_from_observable(Observable(random_hermitian(n, rng)));
    const std::vector<double> p = outcome_probabilities(random_density(n, rng), m);
    double total = 0.0;
    for (double v : p) total += v;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("POVM effects are PSD and complete for random setups") {
  std::mt19937_64 rng(58);
  for (int trial = 0; trial < 15; ++trial) {
    const std::size_t na = 2 + trial % 2;
    const std::size_t nb = 2 + (trial / 2) % 2;
    const GeneralizedMeasurement gm(random_density(nb, rng), random_unitary(na * nb, rng),
                                    Observable(random_hermitian(nb, rng)));
    const std::vector<PovmEffect> effects = extract_povm_effects(gm);
    ComplexMatrix total(na, na);
    for (const PovmEffect& e : effects) {
      CHECK(hermiticity_deviation(e.effect) < 1e-10);
      CHECK(hermitian_eigen(e.effect).eigenvalues.front() >= -1e-10);
      total += e.effect;
    }
    CHECK(frobenius_distance(total, ComplexMatrix::identity(na)) < 1e-10);
  }
}
