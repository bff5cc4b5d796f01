#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qcp/channels.hpp"
#include "qcp/optimize.hpp"
#include "qcp/power.hpp"

using namespace qcp;

TEST_CASE("splitmix streams are deterministic and order-independent") {
  SplitMix64 a = SplitMix64::stream(42, 3);
  SplitMix64 b = SplitMix64::stream(42, 3);
  for (int i = 0; i < 10; ++i) CHECK(a.next() == b.next());

  SplitMix64 c = SplitMix64::stream(42, 4);
  CHECK(SplitMix64::stream(42, 3).next() != c.next());
}

TEST_CASE("random density matrices are valid and deterministic") {
  CHECK(random_density(7, 1).mat()(0, 0).real() == doctest::Approx(1.0));

  const DensityMatrix a = random_density(99, 4);
  const DensityMatrix b = random_density(99, 4);
  CHECK(max_abs_diff(a.mat(), b.mat()) == 0.0);
  CHECK_NOTHROW(DensityMatrix{a.mat()});
}

TEST_CASE("random density ensemble mean approaches the maximally mixed state") {
  SplitMix64 rng(2024);
  ComplexMatrix mean(2, 2);
  const int draws = 10000;
  for (int i = 0; i < draws; ++i) {
    mean = mean + random_density(rng, 2).mat();
  }
  mean = Complex(1.0 / draws, 0.0) * mean;
  CHECK(max_abs_diff(mean, DensityMatrix::maximally_mixed(2).mat()) < 0.02);
}

TEST_CASE("random unitaries satisfy the contract") {
  const ComplexMatrix u1 = random_unitary(5, 1);
  CHECK(std::abs(std::abs(u1(0, 0)) - 1.0) <= 1e-12);

  SplitMix64 rng(6);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t d = 2 + rng.next() % 5;
    const ComplexMatrix u = random_unitary(rng, d);
    CHECK(unitarity_defect(u) <= 1e-12);
    CHECK(one_to_one_norm(u) <= std::sqrt(static_cast<double>(d)) + 1e-12);
  }

  const ComplexMatrix a = random_unitary(123, 3);
  const ComplexMatrix b = random_unitary(123, 3);
  CHECK(max_abs_diff(a, b) == 0.0);
}

TEST_CASE("random Kraus channels validate") {
  SplitMix64 rng(8);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t d = 2 + rng.next() % 2;
    const std::size_t count = 1 + rng.next() % (d * d);
    CHECK(validate(QuantumOperation::kraus(random_kraus_channel(rng, d, count))).passed);
  }
}

TEST_CASE("constant objective is found immediately") {
  OptimizerConfig cfg;
  cfg.restarts = 2;
  cfg.seed = 1;
  const OptResult r = maximize_over_states(
      [](const DensityMatrix& rho) { return trace(rho.mat()).real(); }, 3, cfg);
  CHECK(r.best_value == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("maximal qubit l1 coherence is one") {
  OptimizerConfig cfg;
  cfg.seed = 11;
  const OptResult r =
      maximize_over_states([](const DensityMatrix& rho) { return c_l1(rho); }, 2, cfg);
  CHECK(r.best_value == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(r.best_value <= 1.0 + 1e-9);
}

TEST_CASE("largest eigenvalue maxes out on pure states") {
  OptimizerConfig cfg;
  cfg.seed = 13;
  const OptResult r = maximize_over_states(
      [](const DensityMatrix& rho) { return hermitian_eigenvalues(rho.mat()).front(); }, 2,
      cfg);
  CHECK(r.best_value == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("identical configs give identical results") {
  OptimizerConfig cfg;
  cfg.seed = 17;
  cfg.restarts = 6;
  const auto objective = [](const DensityMatrix& rho) { return c_l1(rho); };
  const OptResult a = maximize_over_states(objective, 2, cfg);
  const OptResult b = maximize_over_states(objective, 2, cfg);
  CHECK(a.best_value == b.best_value);
  CHECK(max_abs_diff(a.best_state->mat(), b.best_state->mat()) == 0.0);
  REQUIRE(a.restarts.size() == b.restarts.size());
  for (std::size_t i = 0; i < a.restarts.size(); ++i) {
    CHECK(a.restarts[i].final_value == b.restarts[i].final_value);
    CHECK(a.restarts[i].iterations == b.restarts[i].iterations);
  }
}

TEST_CASE("per-restart best values never decrease") {
  OptimizerConfig cfg;
  cfg.seed = 19;
  cfg.restarts = 4;
  const OptResult r =
      maximize_over_states([](const DensityMatrix& rho) { return c_l1(rho); }, 3, cfg);
  for (const RestartTrace& tr : r.restarts) {
    for (std::size_t i = 1; i < tr.best_history.size(); ++i) {
      CHECK(tr.best_history[i] >= tr.best_history[i - 1]);
    }
  }
}

TEST_CASE("every iterate is a valid state") {
  OptimizerConfig cfg;
  cfg.seed = 23;
  cfg.restarts = 3;
  cfg.max_iterations = 200;
  std::size_t evaluations = 0;
  const OptResult r = maximize_over_states(
      [&](const DensityMatrix& rho) {
        ++evaluations;
        DensityMatrix strict{rho.mat()};  // throws if the iterate is invalid
        return c_l1(strict);
      },
      2, cfg);
  CHECK(evaluations > 0);
  CHECK(r.best_value >= 0.0);
}

TEST_CASE("gain objective never falls below the basis enumeration value") {
  SplitMix64 rng(29);
  for (int trial = 0; trial < 5; ++trial) {
    const ComplexMatrix u = random_unitary(rng, 2);
    const QuantumOperation op = QuantumOperation::unitary(u);
    const double s = cohering_power(op, CoherenceMeasure::L1).s_value;

    OptimizerConfig cfg;
    cfg.seed = rng.next();
    cfg.restarts = 4;
    const OptResult r = maximize_over_states(
        [&](const DensityMatrix& rho) {
          return c_l1(apply(op, rho)) - c_l1(rho);
        },
        2, cfg);
    CHECK(r.best_value >= s - 1e-9);
  }
}

TEST_CASE("non-finite objectives abort the restart and are reported") {
  OptimizerConfig cfg;
  cfg.seed = 31;
  cfg.restarts = 2;
  std::size_t calls = 0;
  // The basis pre-pass stays finite; every simplex run hits the NaN region.
  const OptResult r = maximize_over_states(
      [&](const DensityMatrix& rho) {
        ++calls;
        if (calls > 2 && calls % 5 == 0) return std::numeric_limits<double>::quiet_NaN();
        return c_l1(rho);
      },
      2, cfg);
  CHECK_FALSE(r.converged);
  bool any_aborted = false;
  for (const RestartTrace& tr : r.restarts) any_aborted = any_aborted || tr.aborted;
  CHECK(any_aborted);
  CHECK(r.best_value >= 0.0);
}
