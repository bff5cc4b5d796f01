#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qcp/channels.hpp"
#include "qcp/optimize.hpp"
#include "qcp/power.hpp"
#include "qcp/verify.hpp"
#include "test_util.hpp"

using namespace qcp;

namespace {

OptimizerConfig quick_config(std::uint64_t seed, std::size_t restarts = 16) {
  OptimizerConfig cfg;
  cfg.seed = seed;
  cfg.restarts = restarts;
  return cfg;
}

double enumerate_power(const ComplexMatrix& u, CoherenceMeasure measure) {
  // Independent enumeration path used as the oracle for the closed forms.
  const std::size_t d = u.rows();
  double best = 0.0;
  for (std::size_t k = 0; k < d; ++k) {
    const DensityMatrix image = apply(QuantumOperation::unitary(u),
                                      DensityMatrix::basis_state(d, k));
    best = std::max(best, coherence(image, measure));
  }
  return best;
}

ComplexMatrix tensor_pow(const ComplexMatrix& m, std::size_t count) {
  ComplexMatrix out = m;
  for (std::size_t i = 1; i < count; ++i) out = tensor(out, m);
  return out;
}

}  // namespace

TEST_CASE("cohering power of the basic channels") {
  const PowerReport h_l1 =
      cohering_power(QuantumOperation::unitary(hadamard_gate()), CoherenceMeasure::L1);
  CHECK(h_l1.s_value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(h_l1.method == PowerMethod::ClosedFormL1Unitary);

  const QuantumOperation dis = QuantumOperation::dismiss(SubsystemShape{{2, 3}}, {1});
  CHECK(cohering_power(dis, CoherenceMeasure::L1).s_value == 0.0);
  CHECK(cohering_power(dis, CoherenceMeasure::RelativeEntropy).s_value == 0.0);
  CHECK(cohering_power(dis, CoherenceMeasure::L1).method == PowerMethod::DismissZero);

  SplitMix64 rng(211);
  const DensityMatrix sigma = random_density(rng, 3);
  const PowerReport app =
      cohering_power(QuantumOperation::append(sigma, 2), CoherenceMeasure::L1);
  CHECK(app.s_value == doctest::Approx(c_l1(sigma)).epsilon(1e-12));
  CHECK(app.method == PowerMethod::AppendClosedForm);
}

TEST_CASE("argmax ties break to the lowest basis index") {
  const PowerReport r =
      cohering_power(QuantumOperation::unitary(hadamard_gate()), CoherenceMeasure::L1);
  CHECK(r.argmax_basis_index == 0);  // both columns give power 1
}

TEST_CASE("l1 closed form for unitaries") {
  CHECK(unitary_power_l1(ComplexMatrix::identity(4)) == doctest::Approx(0.0));
  CHECK(unitary_power_l1(hadamard_gate()) == doctest::Approx(1.0).epsilon(1e-12));
  for (std::size_t n = 1; n <= 4; ++n) {
    CHECK(unitary_power_l1(tensor_pow(hadamard_gate(), n)) ==
          doctest::Approx(std::pow(2.0, n) - 1.0).epsilon(1e-12));
  }
  CHECK_THROWS_AS(unitary_power_l1(Complex(2.0, 0.0) * ComplexMatrix::identity(2)),
                  ValidationError);
}

TEST_CASE("closed forms agree with basis enumeration on random unitaries") {
  SplitMix64 rng(223);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t d = 2 + rng.next() % 3;
    const ComplexMatrix u = random_unitary(rng, d);
    CHECK(std::abs(unitary_power_l1(u) - enumerate_power(u, CoherenceMeasure::L1)) <= 1e-10);
    CHECK(std::abs(unitary_power_relent(u) -
                   enumerate_power(u, CoherenceMeasure::RelativeEntropy)) <= 1e-9);
  }
}

TEST_CASE("relative-entropy closed form on qubit unitaries") {
  CHECK(unitary_power_relent(hadamard_gate()) == doctest::Approx(1.0).epsilon(1e-12));

  SplitMix64 rng(227);
  for (int trial = 0; trial < 20; ++trial) {
    const ComplexMatrix u = random_unitary(rng, 2);
    const double expected = test::binary_entropy_bits(std::norm(u(0, 0)));
    CHECK(unitary_power_relent(u) == doctest::Approx(expected).epsilon(1e-9));
  }

  CHECK(std::abs(unitary_power_relent(relent_gap_unitary()) - 0.0030) <= 2e-3);
}

TEST_CASE("generalized power equals the closed form on qubit unitaries") {
  SplitMix64 rng(229);
  for (int trial = 0; trial < 5; ++trial) {
    const ComplexMatrix u = random_unitary(rng, 2);
    const PowerReport r = generalized_cohering_power(
        QuantumOperation::unitary(u), CoherenceMeasure::L1, quick_config(rng.next()));
    const double s = unitary_power_l1(u);
    CHECK(*r.s_hat_value >= s - 1e-12);
    CHECK(*r.s_hat_value <= s + 1e-4);
    CHECK(r.diagnostics.lower_bound_only);
    CHECK(r.s_hat_witness.has_value());
  }
}

TEST_CASE("generalized power strictly exceeds cohering power on the bundled instance") {
  const PowerReport r = generalized_cohering_power(
      QuantumOperation::unitary(relent_gap_unitary()), CoherenceMeasure::RelativeEntropy,
      quick_config(7, 32));
  CHECK(*r.s_hat_value >= 0.0190 - 2e-3);
  CHECK(*r.s_hat_value > r.s_value);

  // The witness state must actually realize the reported gain.
  const DensityMatrix witness = *r.s_hat_witness;
  const DensityMatrix image =
      apply(QuantumOperation::unitary(relent_gap_unitary()), witness);
  CHECK(c_r(image) - c_r(witness) == doctest::Approx(*r.s_hat_value).epsilon(1e-10));
}

TEST_CASE("identity channel has no generalized power") {
  const PowerReport r = generalized_cohering_power(
      QuantumOperation::unitary(ComplexMatrix::identity(2)), CoherenceMeasure::L1,
      quick_config(3, 8));
  CHECK(*r.s_hat_value <= 1e-8);
}

TEST_CASE("ratio power matches the closed form") {
  CHECK(std::abs(ratio_power_l1(ComplexMatrix::identity(2), quick_config(1, 4))) <= 1e-9);

  const double h_ratio = ratio_power_l1(hadamard_gate(), quick_config(2, 8));
  CHECK(std::abs(h_ratio - 1.0) <= 1e-4);

  SplitMix64 rng(233);
  const ComplexMatrix u = random_unitary(rng, 3);
  const double ratio = ratio_power_l1(u, quick_config(rng.next(), 8));
  CHECK(ratio <= unitary_power_l1(u) + 1e-6);
  CHECK(ratio >= unitary_power_l1(u) - 1e-4);
}

TEST_CASE("coherence gain obeys the closed-form bound on random states") {
  SplitMix64 rng(239);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t d = 2 + rng.next() % 3;
    const ComplexMatrix u = random_unitary(rng, d);
    const double s = unitary_power_l1(u);
    const DensityMatrix rho = random_density(rng, d);
    const double gain = c_l1(apply(QuantumOperation::unitary(u), rho)) - c_l1(rho);
    CHECK(gain <= s * (c_l1(rho) + 1.0) + 1e-9);
  }
}

TEST_CASE("composition bound for the three basic second channels") {
  SplitMix64 rng(241);
  const QuantumOperation op1 =
      QuantumOperation::kraus(random_kraus_channel(rng, 2, 3));
  const double s1 = cohering_power(op1, CoherenceMeasure::L1).s_value;

  SUBCASE("appending an incoherent state is an equality") {
    const DensityMatrix sigma = dephase(random_density(rng, 3));
    const auto [bound, actual] =
        composition_bound_l1(QuantumOperation::append(sigma, 2), op1);
    CHECK(bound == doctest::Approx(s1).epsilon(1e-12));
    CHECK(actual == doctest::Approx(s1).epsilon(1e-10));
  }

  SUBCASE("dismissal never increases the power") {
    const QuantumOperation op_big =
        QuantumOperation::kraus(random_kraus_channel(rng, 4, 2));
    const auto [bound, actual] = composition_bound_l1(
        QuantumOperation::dismiss(SubsystemShape{{2, 2}}, {1}), op_big);
    const double s_big = cohering_power(op_big, CoherenceMeasure::L1).s_value;
    CHECK(actual <= s_big + 1e-9);
    CHECK(actual <= bound + 1e-9);
  }

  SUBCASE("two Hadamards compose to the identity, far below the bound") {
    const QuantumOperation h = QuantumOperation::unitary(hadamard_gate());
    const auto [bound, actual] = composition_bound_l1(h, h);
    CHECK(bound == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(std::abs(actual) <= 1e-9);
  }

  SUBCASE("a Kraus second channel is outside the hypothesis") {
    CHECK_THROWS_AS(composition_bound_l1(op1, op1), ValidationError);
  }
}

TEST_CASE("product bound for unitary lists") {
  const ComplexMatrix h = hadamard_gate();
  const auto [bound_hh, actual_hh] = unitary_product_bound_l1({h, h});
  CHECK(bound_hh == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(std::abs(actual_hh) <= 1e-12);

  const auto [bound_hk, actual_hk] = unitary_product_bound_l1({h, phase_gate()});
  CHECK(actual_hk <= bound_hk + 1e-9);

  const auto [bound_single, actual_single] = unitary_product_bound_l1({h});
  CHECK(bound_single == doctest::Approx(actual_single).epsilon(1e-12));
}

TEST_CASE("tensor power laws on fixed instances") {
  const QuantumOperation h = QuantumOperation::unitary(hadamard_gate());
  CHECK(tensor_power(h, h, CoherenceMeasure::L1) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(tensor_power(h, h, CoherenceMeasure::RelativeEntropy) ==
        doctest::Approx(2.0).epsilon(1e-12));

  SplitMix64 rng(251);
  const QuantumOperation any =
      QuantumOperation::kraus(random_kraus_channel(rng, 2, 2));
  const QuantumOperation dis = QuantumOperation::dismiss(SubsystemShape{{2, 2}}, {0});
  const double s_any = cohering_power(any, CoherenceMeasure::L1).s_value;
  CHECK(tensor_power(any, dis, CoherenceMeasure::L1) ==
        doctest::Approx(s_any).epsilon(1e-9));
}

TEST_CASE("continuity gap") {
  SplitMix64 rng(257);
  const ComplexMatrix u = random_unitary(rng, 4);
  const auto [lhs_same, rhs_same] = continuity_gap(u, u);
  CHECK(lhs_same == 0.0);
  CHECK(rhs_same == 0.0);

  const auto [lhs, rhs] = continuity_gap(hadamard_gate(), ComplexMatrix::identity(2));
  CHECK(lhs == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rhs == doctest::Approx(2.0 * std::sqrt(2.0) * (1.0 + std::sqrt(2.0))).epsilon(1e-12));
  CHECK(lhs <= rhs + 1e-9);

  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t d = 2 + rng.next() % 3;
    const ComplexMatrix a = random_unitary(rng, d);
    const ComplexMatrix b =
        nearest_unitary(a + Complex(1e-4 * rng.uniform(), 0.0) * ginibre(rng, d, d));
    const auto [l, r] = continuity_gap(a, b);
    CHECK(l <= r + 1e-9);
  }
}

TEST_CASE("ancilla coherence bound") {
  const QuantumOperation dis = QuantumOperation::dismiss(SubsystemShape{{2, 2}}, {1});
  CHECK(ancilla_coherence_bound(dis, CoherenceMeasure::L1, quick_config(1, 4)) == 0.0);

  CHECK(ancilla_coherence_bound(QuantumOperation::unitary(hadamard_gate()),
                                CoherenceMeasure::L1, quick_config(2, 4)) ==
        doctest::Approx(1.0).epsilon(1e-12));

  CHECK(ancilla_coherence_bound(QuantumOperation::unitary(relent_gap_unitary()),
                                CoherenceMeasure::RelativeEntropy,
                                quick_config(3, 32)) >= 0.0190 - 2e-3);
}

TEST_CASE("hadamard tensor powers stay maximal over random unitaries") {
  SplitMix64 rng(263);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng.next() % 3;
    const std::size_t dim = std::size_t{1} << n;
    CHECK(unitary_power_l1(random_unitary(rng, dim)) <= std::pow(2.0, n) - 1.0 + 1e-9);
  }
}

TEST_CASE("circuit bounds") {
  CircuitSpec only_incoherent;
  only_incoherent.qubits = 2;
  only_incoherent.gates = {{GateKind::CNOT, {0, 1}}, {GateKind::K, {1}},
                           {GateKind::Kinv, {0}}};
  const CircuitBound cb = circuit_hadamard_bound(only_incoherent);
  CHECK(cb.hadamard_count == 0);
  CHECK(cb.bound == doctest::Approx(0.0));
  CHECK(std::abs(*cb.exact) <= 1e-12);

  CircuitSpec single_h;
  single_h.qubits = 3;
  single_h.gates = {{GateKind::H, {0}}};
  const CircuitBound sh = circuit_hadamard_bound(single_h);
  CHECK(sh.hadamard_count == 1);
  CHECK(sh.bound == doctest::Approx(1.0));
  CHECK(*sh.exact == doctest::Approx(1.0).epsilon(1e-10));

  CircuitSpec all_h;
  all_h.qubits = 3;
  all_h.gates = {{GateKind::H, {0}}, {GateKind::H, {1}}, {GateKind::H, {2}}};
  const CircuitBound ah = circuit_hadamard_bound(all_h);
  CHECK(ah.bound == doctest::Approx(7.0));
  CHECK(*ah.exact == doctest::Approx(7.0).epsilon(1e-10));

  CircuitSpec h_twice;
  h_twice.qubits = 1;
  h_twice.gates = {{GateKind::H, {0}}, {GateKind::H, {0}}};
  const CircuitBound ht = circuit_hadamard_bound(h_twice);
  CHECK(ht.bound == doctest::Approx(3.0));
  CHECK(std::abs(*ht.exact) <= 1e-12);
}

TEST_CASE("circuit validation") {
  CircuitSpec bad;
  bad.qubits = 2;
  bad.gates = {{GateKind::CNOT, {0, 0}}};
  CHECK_THROWS_AS(validate(bad), ValidationError);

  bad.gates = {{GateKind::H, {5}}};
  CHECK_THROWS_AS(validate(bad), ValidationError);

  bad.gates = {{GateKind::Toffoli, {0, 1}}};
  CHECK_THROWS_AS(validate(bad), ValidationError);
}

TEST_CASE("toffoli and cnot embeddings act on the right qubits") {
  // CNOT with control 1, target 0 on three qubits: |011> -> |111>.
  CircuitSpec c;
  c.qubits = 3;
  c.gates = {{GateKind::CNOT, {1, 0}}};
  const ComplexMatrix u = circuit_unitary(c);
  CHECK(u(0b111, 0b011) == Complex(1.0, 0.0));
  CHECK(u(0b011, 0b111) == Complex(1.0, 0.0));
  CHECK(u(0b001, 0b001) == Complex(1.0, 0.0));

  CircuitSpec t;
  t.qubits = 3;
  t.gates = {{GateKind::Toffoli, {0, 2, 1}}};
  const ComplexMatrix ut = circuit_unitary(t);
  CHECK(ut(0b111, 0b101) == Complex(1.0, 0.0));
  CHECK(ut(0b100, 0b100) == Complex(1.0, 0.0));
}
