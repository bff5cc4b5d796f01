// Acceptance suite: one line and one test case per criterion, each pinned to
// the tolerances the library documents.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>

#include "qcp/channels.hpp"
#include "qcp/optimize.hpp"
#include "qcp/power.hpp"
#include "qcp/verify.hpp"

using namespace qcp;

namespace {

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

void announce(int number, const char* name, bool ok, const std::string& detail) {
  std::printf("[acceptance] %d %-34s %s  (%s)\n", number, name, ok ? "PASS" : "FAIL",
              detail.c_str());
  std::fflush(stdout);
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

}  // namespace

TEST_CASE("1: hadamard tensor powers are exactly 2^N - 1") {
  Stopwatch watch;
  double worst = 0.0;
  ComplexMatrix h_n = hadamard_gate();
  for (std::size_t n = 1; n <= 6; ++n) {
    if (n > 1) h_n = tensor(h_n, hadamard_gate());
    const double target = std::pow(2.0, static_cast<double>(n)) - 1.0;
    const double closed = unitary_power_l1(h_n);
    const double enumerated =
        cohering_power(QuantumOperation::unitary(h_n), CoherenceMeasure::L1).s_value;
    worst = std::max(worst, std::abs(closed - target));
    worst = std::max(worst, std::abs(enumerated - target));
  }
  const double elapsed = watch.seconds();
  const bool ok = worst <= 1e-9 && elapsed < 10.0;
  announce(1, "hadamard_maximal_power", ok,
           "worst deviation " + fmt(worst) + ", " + fmt(elapsed) + " s");
  CHECK(worst <= 1e-9);
  CHECK(elapsed < 10.0);
}

TEST_CASE("2: the bundled counterexample separates the two powers") {
  Stopwatch watch;
  const ComplexMatrix u = relent_gap_unitary();
  const DensityMatrix rho = relent_gap_state();
  const double s = unitary_power_relent(u);
  const double gain = c_r(apply(QuantumOperation::unitary(u), rho)) - c_r(rho);
  const double elapsed = watch.seconds();

  const bool ok = std::abs(s - 0.0030) <= 2e-3 && std::abs(gain - 0.0190) <= 2e-3 &&
                  gain > s && elapsed < 1.0;
  announce(2, "counterexample_reproduction", ok,
           "S=" + fmt(s) + " gain=" + fmt(gain) + ", " + fmt(elapsed) + " s");
  CHECK(std::abs(s - 0.0030) <= 2e-3);
  CHECK(std::abs(gain - 0.0190) <= 2e-3);
  CHECK(gain > s);
  CHECK(elapsed < 1.0);
}

TEST_CASE("3: optimizer agrees with the closed form on qubit unitaries") {
  Stopwatch watch;
  double worst_low = 0.0;   // closed minus found (shortfall)
  double worst_high = 0.0;  // found minus closed (would falsify the equality)
  double worst_cross = 0.0;
  for (std::size_t trial = 0; trial < 100; ++trial) {
    SplitMix64 rng = SplitMix64::stream(0xACC3, trial);
    const ComplexMatrix u = random_unitary(rng, 2);
    const double closed = unitary_power_l1(u);
    worst_cross = std::max(
        worst_cross, std::abs(closed - 2.0 * std::abs(u(0, 0)) * std::abs(u(0, 1))));

    OptimizerConfig cfg;
    cfg.seed = rng.next();
    const PowerReport report = generalized_cohering_power(
        QuantumOperation::unitary(u), CoherenceMeasure::L1, cfg);
    worst_low = std::max(worst_low, closed - *report.s_hat_value);
    worst_high = std::max(worst_high, *report.s_hat_value - closed);
  }
  const double elapsed = watch.seconds();
  const bool ok =
      worst_low <= 0.0 && worst_high <= 1e-4 && worst_cross <= 1e-10 && elapsed < 60.0;
  announce(3, "qubit_l1_equality", ok,
           "max shortfall " + fmt(worst_low) + ", max excess " + fmt(worst_high) + ", " +
               fmt(elapsed) + " s");
  CHECK(worst_low <= 0.0);
  CHECK(worst_high <= 1e-4);
  CHECK(worst_cross <= 1e-10);
  CHECK(elapsed < 60.0);
}

TEST_CASE("4: tensor laws hold on random operation pairs") {
  const CaseReport l1 = run_property({PropertyId::P4_TENSOR_L1, 1000, 0x7E5301, 1e-9});
  const CaseReport rent = run_property({PropertyId::P5_TENSOR_RENT, 1000, 0x7E5302, 1e-9});
  const CaseReport unitaries =
      run_property({PropertyId::P2_TENSOR_EQUALITY, 1000, 0x7E5303, 1e-9});
  const bool ok = l1.passed && rent.passed && unitaries.passed && l1.failures == 0 &&
                  rent.failures == 0 && unitaries.failures == 0;
  announce(4, "tensor_laws", ok,
           "worst margins l1 " + fmt(l1.worst_margin) + ", relent " +
               fmt(rent.worst_margin) + ", unitary " + fmt(unitaries.worst_margin));
  CHECK(l1.failures == 0);
  CHECK(rent.failures == 0);
  CHECK(unitaries.failures == 0);
  CHECK(l1.passed);
  CHECK(rent.passed);
  CHECK(unitaries.passed);
}

TEST_CASE("5: composition and product bounds hold") {
  const CaseReport compose = run_property({PropertyId::P3_COMPOSE_BOUND, 1000, 0x7E5304, 1e-9});
  const CaseReport product = run_property({PropertyId::P2_PRODUCT_BOUND, 1000, 0x7E5305, 1e-9});
  const bool ok = compose.passed && product.passed;
  announce(5, "composition_and_product_bounds", ok,
           "worst margins compose " + fmt(compose.worst_margin) + ", product " +
               fmt(product.worst_margin));
  CHECK(compose.failures == 0);
  CHECK(product.failures == 0);
  CHECK(compose.passed);
  CHECK(product.passed);
}

TEST_CASE("6: the continuity bound holds") {
  const CaseReport report = run_property({PropertyId::CONTINUITY, 1000, 0x7E5306, 1e-9});
  announce(6, "continuity_bound", report.passed,
           "worst margin " + fmt(report.worst_margin));
  CHECK(report.failures == 0);
  CHECK(report.passed);
}

TEST_CASE("7: dilation reconstructs qubit and qutrit channels") {
  double worst = 0.0;
  bool dims_ok = true;
  for (std::size_t trial = 0; trial < 50; ++trial) {
    SplitMix64 rng = SplitMix64::stream(0xD11A7E, trial);
    const std::size_t d = trial < 25 ? 2 : 3;
    const QuantumOperation op =
        QuantumOperation::kraus(random_kraus_channel(rng, d, 1 + rng.next() % (d * d)));
    const DilationResult dilation = stinespring_dilate(op);
    dims_ok = dims_ok && dilation.ancilla_dim == d * d;
    worst = std::max(worst, dilation.reconstruction_error);
  }
  const bool ok = dims_ok && worst <= 1e-8;
  announce(7, "stinespring_dilation", ok, "worst reconstruction error " + fmt(worst));
  CHECK(dims_ok);
  CHECK(worst <= 1e-8);
}

TEST_CASE("8: closed forms match enumeration on random unitaries") {
  double worst = 0.0;
  for (std::size_t trial = 0; trial < 500; ++trial) {
    SplitMix64 rng = SplitMix64::stream(0x0C10, trial);
    const std::size_t d = 2 + rng.next() % 3;
    const ComplexMatrix u = random_unitary(rng, d);
    const QuantumOperation op = QuantumOperation::unitary(u);
    for (const CoherenceMeasure measure :
         {CoherenceMeasure::L1, CoherenceMeasure::RelativeEntropy}) {
      double best = 0.0;
      for (std::size_t k = 0; k < d; ++k) {
        best = std::max(best,
                        coherence(apply(op, DensityMatrix::basis_state(d, k)), measure));
      }
      const double closed = measure == CoherenceMeasure::L1 ? unitary_power_l1(u)
                                                            : unitary_power_relent(u);
      worst = std::max(worst, std::abs(closed - best));
    }
  }
  const bool ok = worst <= 1e-9;
  announce(8, "closed_form_vs_enumeration", ok, "worst deviation " + fmt(worst));
  CHECK(worst <= 1e-9);
}

TEST_CASE("9: the ratio form of the l1 power is attained") {
  const CaseReport report = run_property({PropertyId::P8_RATIO_EQUALITY, 50, 0x7E5307, 1e-4});
  announce(9, "ratio_power_equality", report.passed,
           "strict failures " + std::to_string(report.failures) + ", worst shortfall " +
               fmt(report.worst_margin));
  CHECK(report.failures == 0);
  CHECK(report.worst_margin <= 1e-4);
  CHECK(report.passed);
}
