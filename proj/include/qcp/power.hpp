#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "qcp/channels.hpp"
#include "qcp/coherence.hpp"
#include "qcp/optimize.hpp"

namespace qcp {

enum class PowerMethod {
  BasisEnumeration,
  ClosedFormL1Unitary,
  ClosedFormREntUnitary,
  AppendClosedForm,
  DismissZero,
  Optimizer,
};

struct PowerDiagnostics {
  std::size_t restarts = 0;
  std::size_t total_iterations = 0;
  std::size_t aborted_restarts = 0;
  bool converged = true;
  bool lower_bound_only = false;  // set when s_hat comes from a nonconvex search
};

struct PowerReport {
  CoherenceMeasure measure = CoherenceMeasure::L1;
  double s_value = 0.0;
  std::size_t argmax_basis_index = 0;  // lowest index on ties
  std::optional<double> s_hat_value;
  std::optional<DensityMatrix> s_hat_witness;
  PowerMethod method = PowerMethod::BasisEnumeration;
  PowerDiagnostics diagnostics;
};

// Cohering power: the largest coherence the channel creates from a reference
// basis state, found by enumeration. For unitary, appending and dismissal
// channels the closed form is computed as well and must agree to 1e-9.
PowerReport cohering_power(const QuantumOperation& op, CoherenceMeasure measure);

// Closed form for unitary channels under the l1 measure: the squared 1->1
// norm minus one.
double unitary_power_l1(const ComplexMatrix& u);

// Closed form for unitary channels under relative entropy: the largest
// Shannon entropy over the squared-magnitude columns, in bits.
double unitary_power_relent(const ComplexMatrix& u);

// Best found value of the coherence gain over all input states; a certified
// lower bound on the generalized cohering power, never below s_value.
PowerReport generalized_cohering_power(const QuantumOperation& op, CoherenceMeasure measure,
                                       const OptimizerConfig& cfg);

// Best found value of [C_l1(U rho U^dag) - C_l1(rho)] / (C_l1(rho) + 1).
// Every candidate the search visits is checked against the closed-form upper
// bound unitary_power_l1(u).
double ratio_power_l1(const ComplexMatrix& u, const OptimizerConfig& cfg);

// {bound, actual} for the composition law under l1: the second channel must
// be unitary, appending or dismissal.
std::pair<double, double> composition_bound_l1(const QuantumOperation& op2,
                                               const QuantumOperation& op1);

// {bound, actual} for a product of same-dimension unitaries applied
// first-to-last, under l1.
std::pair<double, double> unitary_product_bound_l1(const std::vector<ComplexMatrix>& us);

// Cohering power of op1 (x) op2 by direct enumeration on the product space.
double tensor_power(const QuantumOperation& op1, const QuantumOperation& op2,
                    CoherenceMeasure measure);

// {lhs, rhs} of the Lipschitz bound |S(u) - S(v)| <= 2 sqrt(d) ||u - v||.
std::pair<double, double> continuity_gap(const ComplexMatrix& u, const ComplexMatrix& v);

// Least coherence an ancilla must carry for the channel to be realizable by
// an incoherent operation: the cohering power itself, or for the subadditive
// relative-entropy measure the best found generalized power.
double ancilla_coherence_bound(const QuantumOperation& op, CoherenceMeasure measure,
                               const OptimizerConfig& cfg);

enum class GateKind { H, K, Kinv, CNOT, Toffoli };

struct CircuitGate {
  GateKind gate = GateKind::H;
  std::vector<std::size_t> on;
};

struct CircuitSpec {
  std::size_t qubits = 0;
  std::vector<CircuitGate> gates;
};

void validate(const CircuitSpec& circuit);  // throws ValidationError

// Full-space unitary of the circuit, gates applied first-to-last. Qubit 0 is
// the most significant tensor factor.
ComplexMatrix circuit_unitary(const CircuitSpec& circuit);

struct CircuitBound {
  std::size_t hadamard_count = 0;
  double bound = 0.0;            // 2^{#H} - 1
  std::optional<double> exact;   // closed-form l1 power of the composed unitary, N <= 6
};

CircuitBound circuit_hadamard_bound(const CircuitSpec& circuit);

ComplexMatrix hadamard_gate();
ComplexMatrix phase_gate();      // diag(1, i)
ComplexMatrix phase_gate_inv();  // diag(1, -i)

const char* method_name(PowerMethod method);

}  // namespace qcp
