#include "qcp/power.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>
#include <utility>

namespace qcp {

namespace {

void require_unitary(const ComplexMatrix& u) {
  if (!u.is_square() || !u.all_finite()) {
    throw ValidationError("expected a finite square matrix");
  }
  const double defect = unitarity_defect(u);
  if (defect > kUnitaryTol) {
    throw ValidationError("matrix is not unitary (defect " + std::to_string(defect) + ")");
  }
}

// Channels built from Tensor nodes re-derive their Kraus form on every
// application; collapse once before an enumeration loop.
QuantumOperation enumeration_form(const QuantumOperation& op) {
  if (op.holds<TensorOp>()) {
    return QuantumOperation::kraus_unchecked(to_kraus(op).ops);
  }
  return op;
}

double basis_image_coherence(const QuantumOperation& op, std::size_t k,
                             CoherenceMeasure measure) {
  const DensityMatrix image = apply(op, DensityMatrix::basis_state(op.in_dim(), k));
  return coherence(image, measure);
}

}  // namespace

double unitary_power_l1(const ComplexMatrix& u) {
  require_unitary(u);
  const double norm = one_to_one_norm(u);
  return norm * norm - 1.0;
}

double unitary_power_relent(const ComplexMatrix& u) {
  require_unitary(u);
  const std::size_t d = u.rows();
  double best = 0.0;
  std::vector<double> probs(d);
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t i = 0; i < d; ++i) probs[i] = std::norm(u(i, j));
    best = std::max(best, shannon_entropy_bits(probs));
  }
  return best;
}

PowerReport cohering_power(const QuantumOperation& op, CoherenceMeasure measure) {
  const QuantumOperation eval_op = enumeration_form(op);
  const std::size_t d = eval_op.in_dim();

  PowerReport report;
  report.measure = measure;
  report.s_value = -1.0;
  for (std::size_t k = 0; k < d; ++k) {
    const double value = basis_image_coherence(eval_op, k, measure);
    if (value > report.s_value) {
      report.s_value = value;
      report.argmax_basis_index = k;
    }
  }

  // Closed forms for the basic channel families double as oracles.
  std::optional<double> closed;
  if (const auto* u = std::get_if<UnitaryOp>(&op.variant())) {
    closed = measure == CoherenceMeasure::L1 ? unitary_power_l1(u->u)
                                             : unitary_power_relent(u->u);
    report.method = measure == CoherenceMeasure::L1 ? PowerMethod::ClosedFormL1Unitary
                                                    : PowerMethod::ClosedFormREntUnitary;
  } else if (const auto* a = std::get_if<AppendOp>(&op.variant())) {
    closed = coherence(a->sigma, measure);
    report.method = PowerMethod::AppendClosedForm;
  } else if (std::get_if<DismissOp>(&op.variant()) != nullptr) {
    closed = 0.0;
    report.method = PowerMethod::DismissZero;
  }
  if (closed.has_value() && std::abs(*closed - report.s_value) > 1e-9) {
    throw NumericalError("closed-form cohering power disagrees with basis enumeration (" +
                         std::to_string(*closed) + " vs " + std::to_string(report.s_value) +
                         ")");
  }
  return report;
}

PowerReport generalized_cohering_power(const QuantumOperation& op, CoherenceMeasure measure,
                                       const OptimizerConfig& cfg) {
  PowerReport report = cohering_power(op, measure);

  // Basis states are feasible, so the cohering power is a certified floor for
  // the reported value. Where a closed form exists it pins the same floor
  // without the rounding of the enumeration path.
  double floor_value = report.s_value;
  if (const auto* u = std::get_if<UnitaryOp>(&op.variant())) {
    floor_value = std::max(floor_value, measure == CoherenceMeasure::L1
                                            ? unitary_power_l1(u->u)
                                            : unitary_power_relent(u->u));
  } else if (const auto* a = std::get_if<AppendOp>(&op.variant())) {
    floor_value = std::max(floor_value, coherence(a->sigma, measure));
  }

  const QuantumOperation eval_op = enumeration_form(op);
  const auto gain = [&](const DensityMatrix& rho) {
    return coherence(apply(eval_op, rho), measure) - coherence(rho, measure);
  };
  const OptResult opt = maximize_over_states(gain, eval_op.in_dim(), cfg);

  if (opt.best_value >= floor_value) {
    report.s_hat_value = opt.best_value;
    report.s_hat_witness = opt.best_state;
  } else {
    report.s_hat_value = floor_value;
    report.s_hat_witness = DensityMatrix::basis_state(eval_op.in_dim(),
                                                      report.argmax_basis_index);
  }

  report.method = PowerMethod::Optimizer;
  report.diagnostics.restarts = opt.restarts.size();
  report.diagnostics.converged = opt.converged;
  report.diagnostics.lower_bound_only = true;
  for (const RestartTrace& tr : opt.restarts) {
    report.diagnostics.total_iterations += tr.iterations;
    if (tr.aborted) ++report.diagnostics.aborted_restarts;
  }
  return report;
}

double ratio_power_l1(const ComplexMatrix& u, const OptimizerConfig& cfg) {
  const double closed = unitary_power_l1(u);
  const QuantumOperation op = QuantumOperation::unitary(u);

  auto violations = std::make_shared<std::size_t>(0);
  const auto ratio = [&, violations](const DensityMatrix& rho) {
    const double before = c_l1(rho);
    const double after = c_l1(apply(op, rho));
    if (after - before > closed * (before + 1.0) + 1e-9) ++*violations;
    return (after - before) / (before + 1.0);
  };

  const OptResult opt = maximize_over_states(ratio, u.rows(), cfg);
  if (*violations > 0) {
    throw NumericalError("coherence gain exceeded the closed-form bound on " +
                         std::to_string(*violations) + " optimizer iterates");
  }
  if (opt.best_value > closed + 1e-6) {
    throw NumericalError("best ratio exceeded the closed-form cohering power");
  }
  return opt.best_value;
}

std::pair<double, double> composition_bound_l1(const QuantumOperation& op2,
                                               const QuantumOperation& op1) {
  if (!op2.holds<UnitaryOp>() && !op2.holds<AppendOp>() && !op2.holds<DismissOp>()) {
    throw ValidationError(
        "composition bound requires a unitary, appending or dismissal second channel");
  }
  const double s1 = cohering_power(op1, CoherenceMeasure::L1).s_value;
  const double s2 = cohering_power(op2, CoherenceMeasure::L1).s_value;
  const double bound = (s2 + 1.0) * (s1 + 1.0) - 1.0;
  const double actual =
      cohering_power(compose_ops({op1, op2}), CoherenceMeasure::L1).s_value;
  return {bound, actual};
}

std::pair<double, double> unitary_product_bound_l1(const std::vector<ComplexMatrix>& us) {
  if (us.empty()) throw ValidationError("empty unitary list");
  double bound = 1.0;
  for (const ComplexMatrix& u : us) bound *= unitary_power_l1(u) + 1.0;
  bound -= 1.0;

  // Applied first-to-last: the total matrix is us[n-1] ... us[0].
  ComplexMatrix product = us.front();
  for (std::size_t i = 1; i < us.size(); ++i) {
    if (us[i].rows() != product.rows()) throw ValidationError("dimension mismatch");
    product = us[i] * product;
  }
  return {bound, unitary_power_l1(product)};
}

double tensor_power(const QuantumOperation& op1, const QuantumOperation& op2,
                    CoherenceMeasure measure) {
  return cohering_power(tensor_ops({op1, op2}), measure).s_value;
}

std::pair<double, double> continuity_gap(const ComplexMatrix& u, const ComplexMatrix& v) {
  require_unitary(u);
  require_unitary(v);
  if (u.rows() != v.rows()) throw ValidationError("dimension mismatch");
  const double lhs = std::abs(unitary_power_l1(u) - unitary_power_l1(v));
  const double rhs =
      2.0 * std::sqrt(static_cast<double>(u.rows())) * one_to_one_norm(u - v);
  return {lhs, rhs};
}

double ancilla_coherence_bound(const QuantumOperation& op, CoherenceMeasure measure,
                               const OptimizerConfig& cfg) {
  if (measure == CoherenceMeasure::L1) {
    return cohering_power(op, measure).s_value;
  }
  return *generalized_cohering_power(op, measure, cfg).s_hat_value;
}

ComplexMatrix hadamard_gate() {
  const double inv = 1.0 / std::sqrt(2.0);
  return ComplexMatrix(2, 2, {Complex(inv), Complex(inv), Complex(inv), Complex(-inv)});
}

ComplexMatrix phase_gate() {
  return ComplexMatrix(2, 2, {Complex(1.0), Complex(0.0), Complex(0.0), Complex(0.0, 1.0)});
}

ComplexMatrix phase_gate_inv() {
  return ComplexMatrix(2, 2, {Complex(1.0), Complex(0.0), Complex(0.0), Complex(0.0, -1.0)});
}

namespace {

std::size_t arity(GateKind g) {
  switch (g) {
    case GateKind::H:
    case GateKind::K:
    case GateKind::Kinv:
      return 1;
    case GateKind::CNOT:
      return 2;
    case GateKind::Toffoli:
      return 3;
  }
  return 0;
}

// Qubit q occupies bit (N-1-q) of the flat basis index.
bool bit_of(std::size_t index, std::size_t qubit, std::size_t n) {
  return (index >> (n - 1 - qubit)) & 1u;
}

std::size_t flip_bit(std::size_t index, std::size_t qubit, std::size_t n) {
  return index ^ (std::size_t{1} << (n - 1 - qubit));
}

ComplexMatrix gate_unitary(const CircuitGate& gate, std::size_t n) {
  const std::size_t dim = std::size_t{1} << n;
  switch (gate.gate) {
    case GateKind::H:
    case GateKind::K:
    case GateKind::Kinv: {
      const ComplexMatrix g = gate.gate == GateKind::H    ? hadamard_gate()
                              : gate.gate == GateKind::K  ? phase_gate()
                                                          : phase_gate_inv();
      const std::size_t q = gate.on[0];
      std::vector<ComplexMatrix> factors;
      if (q > 0) factors.push_back(ComplexMatrix::identity(std::size_t{1} << q));
      factors.push_back(g);
      if (n - 1 - q > 0)
        factors.push_back(ComplexMatrix::identity(std::size_t{1} << (n - 1 - q)));
      return tensor(factors);
    }
    case GateKind::CNOT: {
      ComplexMatrix u(dim, dim);
      for (std::size_t b = 0; b < dim; ++b) {
        const std::size_t target =
            bit_of(b, gate.on[0], n) ? flip_bit(b, gate.on[1], n) : b;
        u(target, b) = 1.0;
      }
      return u;
    }
    case GateKind::Toffoli: {
      ComplexMatrix u(dim, dim);
      for (std::size_t b = 0; b < dim; ++b) {
        const bool both = bit_of(b, gate.on[0], n) && bit_of(b, gate.on[1], n);
        const std::size_t target = both ? flip_bit(b, gate.on[2], n) : b;
        u(target, b) = 1.0;
      }
      return u;
    }
  }
  throw ValidationError("unknown gate kind");
}

}  // namespace

void validate(const CircuitSpec& circuit) {
  if (circuit.qubits == 0) throw ValidationError("circuit needs at least one qubit");
  for (const CircuitGate& gate : circuit.gates) {
    if (gate.on.size() != arity(gate.gate)) {
      throw ValidationError("gate has the wrong number of target indices");
    }
    for (std::size_t q : gate.on) {
      if (q >= circuit.qubits) throw ValidationError("gate index out of range");
    }
    for (std::size_t i = 0; i < gate.on.size(); ++i)
      for (std::size_t j = i + 1; j < gate.on.size(); ++j)
        if (gate.on[i] == gate.on[j]) throw ValidationError("gate indices must be distinct");
  }
}

ComplexMatrix circuit_unitary(const CircuitSpec& circuit) {
  validate(circuit);
  const std::size_t dim = std::size_t{1} << circuit.qubits;
  ComplexMatrix u = ComplexMatrix::identity(dim);
  for (const CircuitGate& gate : circuit.gates) {
    u = gate_unitary(gate, circuit.qubits) * u;
  }
  return u;
}

CircuitBound circuit_hadamard_bound(const CircuitSpec& circuit) {
  validate(circuit);
  CircuitBound out;
  for (const CircuitGate& gate : circuit.gates) {
    if (gate.gate == GateKind::H) ++out.hadamard_count;
  }
  out.bound = std::ldexp(1.0, static_cast<int>(out.hadamard_count)) - 1.0;
  if (circuit.qubits <= 6) {
    out.exact = unitary_power_l1(circuit_unitary(circuit));
    if (*out.exact > out.bound + 1e-9) {
      throw NumericalError("circuit power exceeded the Hadamard-count bound");
    }
  }
  return out;
}

const char* method_name(PowerMethod method) {
  switch (method) {
    case PowerMethod::BasisEnumeration:
      return "basis_enumeration";
    case PowerMethod::ClosedFormL1Unitary:
      return "closed_form_l1_unitary";
    case PowerMethod::ClosedFormREntUnitary:
      return "closed_form_relent_unitary";
    case PowerMethod::AppendClosedForm:
      return "append_closed_form";
    case PowerMethod::DismissZero:
      return "dismiss_zero";
    case PowerMethod::Optimizer:
      return "optimizer";
  }
  return "unknown";
}

}  // namespace qcp
