#pragma once

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

#include "qcp/coherence.hpp"
#include "qcp/complex_matrix.hpp"

namespace qcp {

class QuantumOperation;

struct UnitaryOp {
  ComplexMatrix u;
};

struct KrausOp {
  std::vector<ComplexMatrix> ops;
  std::size_t in_dim = 0;
  std::size_t out_dim = 0;
};

// rho -> rho (x) sigma, appended factor last.
struct AppendOp {
  DensityMatrix sigma;
  std::size_t in_dim = 0;
};

// Partial trace over the listed factors of the shape.
struct DismissOp {
  SubsystemShape shape;
  std::vector<std::size_t> traced;
};

// Steps applied first-to-last.
struct ComposeOp {
  std::vector<QuantumOperation> steps;
};

struct TensorOp {
  std::vector<QuantumOperation> factors;
};

struct ValidationReport {
  bool passed = true;
  double completeness_defect = 0.0;  // worst |sum K^dag K - I| over Kraus lists
  double unitarity_defect = 0.0;     // worst unitary defect over unitary variants
  bool dimension_chain_ok = true;
  std::vector<std::string> failures;
};

// Immutable channel description. The checked factories validate on
// construction and throw ValidationError; the *_unchecked factories store the
// data as-is so that candidates can be inspected with validate().
class QuantumOperation {
 public:
  using Variant = std::variant<UnitaryOp, KrausOp, AppendOp, DismissOp, ComposeOp, TensorOp>;

  static QuantumOperation unitary(ComplexMatrix u);
  static QuantumOperation kraus(std::vector<ComplexMatrix> ops);
  static QuantumOperation append(DensityMatrix sigma, std::size_t in_dim);
  static QuantumOperation dismiss(SubsystemShape shape, std::vector<std::size_t> traced);
  static QuantumOperation compose(std::vector<QuantumOperation> steps);
  static QuantumOperation tensor_product(std::vector<QuantumOperation> factors);

  static QuantumOperation unitary_unchecked(ComplexMatrix u);
  static QuantumOperation kraus_unchecked(std::vector<ComplexMatrix> ops);
  static QuantumOperation append_unchecked(DensityMatrix sigma, std::size_t in_dim);
  static QuantumOperation dismiss_unchecked(SubsystemShape shape,
                                            std::vector<std::size_t> traced);
  static QuantumOperation compose_unchecked(std::vector<QuantumOperation> steps);
  static QuantumOperation tensor_unchecked(std::vector<QuantumOperation> factors);

  std::size_t in_dim() const;
  std::size_t out_dim() const;

  const Variant& variant() const { return v_; }

  template <typename T>
  bool holds() const {
    return std::holds_alternative<T>(v_);
  }

 private:
  explicit QuantumOperation(Variant v) : v_(std::move(v)) {}
  Variant v_;
};

QuantumOperation compose_ops(std::vector<QuantumOperation> steps);
QuantumOperation tensor_ops(std::vector<QuantumOperation> factors);

ValidationReport validate(const QuantumOperation& op);

// Linear action of the channel on an arbitrary matrix (not just states).
ComplexMatrix apply_linear(const QuantumOperation& op, const ComplexMatrix& x);

DensityMatrix apply(const QuantumOperation& op, const DensityMatrix& rho);

// Kraus normal form; the result satisfies sum K^dag K = I within kUnitaryTol
// and agrees with apply_linear on all basis matrix units.
KrausOp to_kraus(const QuantumOperation& op);

// True iff every Kraus operator has at most one entry of magnitude > tol per
// column. At dimensions <= 16 the result is cross-checked against the
// diagonality of the channel on basis projectors.
bool is_incoherent_operation(const QuantumOperation& op, double tol = kIncoherenceTol);

struct DilationResult {
  std::size_t ancilla_dim = 0;
  std::vector<Complex> ancilla_state;  // pure |psi>, the first ancilla basis vector
  ComplexMatrix big_unitary;           // on H (x) K, system factor first
  double reconstruction_error = 0.0;   // max-entry gap over seeded random states
};

// Unitary dilation on a d^2-dimensional ancilla: the channel equals appending
// |psi><psi|, conjugating by big_unitary and dismissing the ancilla.
DilationResult stinespring_dilate(const QuantumOperation& op, std::size_t check_states = 20);

}  // namespace qcp
