#include "qcp/channels.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "qcp/optimize.hpp"

namespace qcp {

namespace {

std::size_t variant_in_dim(const QuantumOperation::Variant& v);
std::size_t variant_out_dim(const QuantumOperation::Variant& v);

std::size_t variant_in_dim(const QuantumOperation::Variant& v) {
  struct Visitor {
    std::size_t operator()(const UnitaryOp& o) const { return o.u.rows(); }
    std::size_t operator()(const KrausOp& o) const { return o.in_dim; }
    std::size_t operator()(const AppendOp& o) const { return o.in_dim; }
    std::size_t operator()(const DismissOp& o) const { return o.shape.total(); }
    std::size_t operator()(const ComposeOp& o) const {
      return o.steps.empty() ? 0 : o.steps.front().in_dim();
    }
    std::size_t operator()(const TensorOp& o) const {
      std::size_t d = 1;
      for (const auto& f : o.factors) d *= f.in_dim();
      return d;
    }
  };
  return std::visit(Visitor{}, v);
}

std::size_t variant_out_dim(const QuantumOperation::Variant& v) {
  struct Visitor {
    std::size_t operator()(const UnitaryOp& o) const { return o.u.rows(); }
    std::size_t operator()(const KrausOp& o) const { return o.out_dim; }
    std::size_t operator()(const AppendOp& o) const { return o.in_dim * o.sigma.dim(); }
    std::size_t operator()(const DismissOp& o) const {
      std::size_t d = 1;
      for (std::size_t i = 0; i < o.shape.size(); ++i) {
        if (std::find(o.traced.begin(), o.traced.end(), i) == o.traced.end()) {
          d *= o.shape.dims[i];
        }
      }
      return d;
    }
    std::size_t operator()(const ComposeOp& o) const {
      return o.steps.empty() ? 0 : o.steps.back().out_dim();
    }
    std::size_t operator()(const TensorOp& o) const {
      std::size_t d = 1;
      for (const auto& f : o.factors) d *= f.out_dim();
      return d;
    }
  };
  return std::visit(Visitor{}, v);
}

std::vector<std::size_t> kept_indices(const DismissOp& o) {
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < o.shape.size(); ++i) {
    if (std::find(o.traced.begin(), o.traced.end(), i) == o.traced.end()) keep.push_back(i);
  }
  return keep;
}

void validate_into(const QuantumOperation& op, ValidationReport& report);

void validate_variant(const QuantumOperation::Variant& v, ValidationReport& report) {
  struct Visitor {
    ValidationReport& report;

    void fail(std::string msg) {
      report.passed = false;
      report.failures.push_back(std::move(msg));
    }

    void operator()(const UnitaryOp& o) {
      if (!o.u.is_square() || !o.u.all_finite()) {
        fail("unitary operator must be a finite square matrix");
        return;
      }
      const double defect = unitarity_defect(o.u);
      report.unitarity_defect = std::max(report.unitarity_defect, defect);
      if (defect > kUnitaryTol) {
        fail("unitary defect " + std::to_string(defect) + " exceeds tolerance");
      }
    }

    void operator()(const KrausOp& o) {
      if (o.ops.empty()) {
        fail("Kraus list is empty");
        return;
      }
      for (const ComplexMatrix& k : o.ops) {
        if (k.rows() != o.out_dim || k.cols() != o.in_dim || !k.all_finite()) {
          fail("Kraus operators must share the same finite in/out shape");
          return;
        }
      }
      ComplexMatrix sum(o.in_dim, o.in_dim);
      for (const ComplexMatrix& k : o.ops) sum = sum + adjoint(k) * k;
      const double defect = max_abs_diff(sum, ComplexMatrix::identity(o.in_dim));
      report.completeness_defect = std::max(report.completeness_defect, defect);
      if (defect > kUnitaryTol) {
        fail("Kraus completeness defect " + std::to_string(defect) + " exceeds tolerance");
      }
    }

    void operator()(const AppendOp& o) {
      if (o.in_dim == 0) fail("append input dimension must be positive");
    }

    void operator()(const DismissOp& o) {
      if (o.shape.size() == 0) {
        fail("dismissal shape is empty");
        return;
      }
      if (o.traced.empty()) fail("dismissal must trace at least one factor");
      std::vector<bool> seen(o.shape.size(), false);
      for (std::size_t t : o.traced) {
        if (t >= o.shape.size()) {
          fail("traced index out of range");
          return;
        }
        if (seen[t]) {
          fail("duplicate traced index");
          return;
        }
        seen[t] = true;
      }
    }

    void operator()(const ComposeOp& o) {
      if (o.steps.empty()) {
        fail("composition has no steps");
        return;
      }
      for (const auto& s : o.steps) validate_into(s, report);
      for (std::size_t i = 0; i + 1 < o.steps.size(); ++i) {
        if (o.steps[i].out_dim() != o.steps[i + 1].in_dim()) {
          report.dimension_chain_ok = false;
          fail("composition dimension chain mismatch at step " + std::to_string(i));
        }
      }
    }

    void operator()(const TensorOp& o) {
      if (o.factors.empty()) {
        fail("tensor product has no factors");
        return;
      }
      for (const auto& f : o.factors) validate_into(f, report);
    }
  };
  std::visit(Visitor{report}, v);
}

void validate_into(const QuantumOperation& op, ValidationReport& report) {
  validate_variant(op.variant(), report);
}

QuantumOperation checked(QuantumOperation op) {
  const ValidationReport report = validate(op);
  if (!report.passed) {
    throw ValidationError("invalid quantum operation: " + report.failures.front());
  }
  return op;
}

}  // namespace

QuantumOperation QuantumOperation::unitary_unchecked(ComplexMatrix u) {
  return QuantumOperation(Variant(UnitaryOp{std::move(u)}));
}

QuantumOperation QuantumOperation::kraus_unchecked(std::vector<ComplexMatrix> ops) {
  KrausOp k;
  if (!ops.empty()) {
    k.out_dim = ops.front().rows();
    k.in_dim = ops.front().cols();
  }
  k.ops = std::move(ops);
  return QuantumOperation(Variant(std::move(k)));
}

QuantumOperation QuantumOperation::append_unchecked(DensityMatrix sigma, std::size_t in_dim) {
  return QuantumOperation(Variant(AppendOp{std::move(sigma), in_dim}));
}

QuantumOperation QuantumOperation::dismiss_unchecked(SubsystemShape shape,
                                                     std::vector<std::size_t> traced) {
  return QuantumOperation(Variant(DismissOp{std::move(shape), std::move(traced)}));
}

QuantumOperation QuantumOperation::compose_unchecked(std::vector<QuantumOperation> steps) {
  return QuantumOperation(Variant(ComposeOp{std::move(steps)}));
}

QuantumOperation QuantumOperation::tensor_unchecked(std::vector<QuantumOperation> factors) {
  return QuantumOperation(Variant(TensorOp{std::move(factors)}));
}

QuantumOperation QuantumOperation::unitary(ComplexMatrix u) {
  return checked(unitary_unchecked(std::move(u)));
}

QuantumOperation QuantumOperation::kraus(std::vector<ComplexMatrix> ops) {
  return checked(kraus_unchecked(std::move(ops)));
}

QuantumOperation QuantumOperation::append(DensityMatrix sigma, std::size_t in_dim) {
  return checked(append_unchecked(std::move(sigma), in_dim));
}

QuantumOperation QuantumOperation::dismiss(SubsystemShape shape,
                                           std::vector<std::size_t> traced) {
  return checked(dismiss_unchecked(std::move(shape), std::move(traced)));
}

QuantumOperation QuantumOperation::compose(std::vector<QuantumOperation> steps) {
  return checked(compose_unchecked(std::move(steps)));
}

QuantumOperation QuantumOperation::tensor_product(std::vector<QuantumOperation> factors) {
  return checked(tensor_unchecked(std::move(factors)));
}

std::size_t QuantumOperation::in_dim() const { return variant_in_dim(v_); }
std::size_t QuantumOperation::out_dim() const { return variant_out_dim(v_); }

QuantumOperation compose_ops(std::vector<QuantumOperation> steps) {
  return QuantumOperation::compose(std::move(steps));
}

QuantumOperation tensor_ops(std::vector<QuantumOperation> factors) {
  return QuantumOperation::tensor_product(std::move(factors));
}

ValidationReport validate(const QuantumOperation& op) {
  ValidationReport report;
  validate_into(op, report);
  return report;
}

ComplexMatrix apply_linear(const QuantumOperation& op, const ComplexMatrix& x) {
  if (!x.is_square() || x.rows() != op.in_dim()) {
    throw ValidationError("state dimension does not match channel input dimension");
  }
  struct Visitor {
    const ComplexMatrix& x;

    ComplexMatrix operator()(const UnitaryOp& o) const { return o.u * x * adjoint(o.u); }

    ComplexMatrix operator()(const KrausOp& o) const {
      ComplexMatrix acc(o.out_dim, o.out_dim);
      for (const ComplexMatrix& k : o.ops) acc = acc + k * x * adjoint(k);
      return acc;
    }

    ComplexMatrix operator()(const AppendOp& o) const { return tensor(x, o.sigma.mat()); }

    ComplexMatrix operator()(const DismissOp& o) const {
      return partial_trace(x, o.shape, kept_indices(o));
    }

    ComplexMatrix operator()(const ComposeOp& o) const {
      ComplexMatrix acc = x;
      for (const auto& step : o.steps) acc = apply_linear(step, acc);
      return acc;
    }

    ComplexMatrix operator()(const TensorOp& o) const {
      // General inputs may be entangled across the factors, so fall back to
      // the combined Kraus form.
      KrausOp combined;
      combined.ops.push_back(ComplexMatrix::identity(1));
      combined.in_dim = 1;
      combined.out_dim = 1;
      for (const auto& f : o.factors) {
        const KrausOp next = to_kraus(f);
        std::vector<ComplexMatrix> merged;
        merged.reserve(combined.ops.size() * next.ops.size());
        for (const auto& a : combined.ops)
          for (const auto& b : next.ops) merged.push_back(tensor(a, b));
        combined.ops = std::move(merged);
        combined.in_dim *= next.in_dim;
        combined.out_dim *= next.out_dim;
      }
      Visitor inner{x};
      return inner(combined);
    }
  };
  return std::visit(Visitor{x}, op.variant());
}

DensityMatrix apply(const QuantumOperation& op, const DensityMatrix& rho) {
  if (rho.dim() != op.in_dim()) {
    throw ValidationError("state dimension does not match channel input dimension");
  }
  return DensityMatrix::from_channel_output(apply_linear(op, rho.mat()));
}

namespace {

std::vector<ComplexMatrix> kraus_list(const QuantumOperation& op);

std::vector<ComplexMatrix> kraus_of_variant(const QuantumOperation::Variant& v) {
  struct Visitor {
    std::vector<ComplexMatrix> operator()(const UnitaryOp& o) const { return {o.u}; }

    std::vector<ComplexMatrix> operator()(const KrausOp& o) const { return o.ops; }

    std::vector<ComplexMatrix> operator()(const AppendOp& o) const {
      // sigma = sum p_i |v_i><v_i|  ->  K_i = sqrt(p_i) (I (x) |v_i>)
      const HermitianEigensystem sys = hermitian_eigensystem(o.sigma.mat());
      const std::size_t k = o.sigma.dim();
      std::vector<ComplexMatrix> ops;
      for (std::size_t idx = 0; idx < k; ++idx) {
        const double p = std::max(sys.values[idx], 0.0);
        if (p == 0.0) continue;
        ComplexMatrix column(k, 1);
        for (std::size_t i = 0; i < k; ++i) column(i, 0) = sys.vectors(i, idx);
        ops.push_back(tensor(ComplexMatrix::identity(o.in_dim),
                             Complex(std::sqrt(p), 0.0) * column));
      }
      return ops;
    }

    std::vector<ComplexMatrix> operator()(const DismissOp& o) const {
      // One operator per traced multi-index: identity on kept factors, a
      // basis bra on each traced factor.
      const std::size_t n = o.shape.size();
      std::vector<bool> is_traced(n, false);
      for (std::size_t t : o.traced) is_traced[t] = true;
      std::size_t traced_dim = 1;
      for (std::size_t i = 0; i < n; ++i)
        if (is_traced[i]) traced_dim *= o.shape.dims[i];

      std::vector<ComplexMatrix> ops;
      ops.reserve(traced_dim);
      for (std::size_t t = 0; t < traced_dim; ++t) {
        std::vector<std::size_t> digits;
        std::size_t rem = t;
        for (std::size_t i = n; i-- > 0;) {
          if (is_traced[i]) {
            digits.push_back(rem % o.shape.dims[i]);
            rem /= o.shape.dims[i];
          }
        }
        std::reverse(digits.begin(), digits.end());

        std::vector<ComplexMatrix> factors;
        std::size_t digit_pos = 0;
        for (std::size_t i = 0; i < n; ++i) {
          if (is_traced[i]) {
            ComplexMatrix bra(1, o.shape.dims[i]);
            bra(0, digits[digit_pos++]) = 1.0;
            factors.push_back(std::move(bra));
          } else {
            factors.push_back(ComplexMatrix::identity(o.shape.dims[i]));
          }
        }
        ops.push_back(tensor(factors));
      }
      return ops;
    }

    std::vector<ComplexMatrix> operator()(const ComposeOp& o) const {
      std::vector<ComplexMatrix> acc = kraus_list(o.steps.front());
      for (std::size_t s = 1; s < o.steps.size(); ++s) {
        const std::vector<ComplexMatrix> next = kraus_list(o.steps[s]);
        std::vector<ComplexMatrix> merged;
        merged.reserve(acc.size() * next.size());
        for (const auto& b : next)
          for (const auto& a : acc) {
            ComplexMatrix prod = b * a;
            if (max_abs(prod) > 0.0) merged.push_back(std::move(prod));
          }
        if (merged.empty()) merged.push_back(ComplexMatrix(next.front().rows(),
                                                           acc.front().cols()));
        acc = std::move(merged);
      }
      return acc;
    }

    std::vector<ComplexMatrix> operator()(const TensorOp& o) const {
      std::vector<ComplexMatrix> acc = kraus_list(o.factors.front());
      for (std::size_t f = 1; f < o.factors.size(); ++f) {
        const std::vector<ComplexMatrix> next = kraus_list(o.factors[f]);
        std::vector<ComplexMatrix> merged;
        merged.reserve(acc.size() * next.size());
        for (const auto& a : acc)
          for (const auto& b : next) merged.push_back(tensor(a, b));
        acc = std::move(merged);
      }
      return acc;
    }
  };
  return std::visit(Visitor{}, v);
}

std::vector<ComplexMatrix> kraus_list(const QuantumOperation& op) {
  return kraus_of_variant(op.variant());
}

}  // namespace

KrausOp to_kraus(const QuantumOperation& op) {
  KrausOp out;
  out.ops = kraus_list(op);
  out.in_dim = op.in_dim();
  out.out_dim = op.out_dim();

  ComplexMatrix sum(out.in_dim, out.in_dim);
  for (const ComplexMatrix& k : out.ops) sum = sum + adjoint(k) * k;
  const double defect = max_abs_diff(sum, ComplexMatrix::identity(out.in_dim));
  if (defect > kUnitaryTol) {
    throw NumericalError("Kraus normal form lost trace preservation (defect " +
                         std::to_string(defect) + ")");
  }
  return out;
}

bool is_incoherent_operation(const QuantumOperation& op, double tol) {
  if (!(tol > 0.0)) throw ValidationError("tolerance must be positive");
  const KrausOp k = to_kraus(op);

  bool column_criterion = true;
  for (const ComplexMatrix& m : k.ops) {
    for (std::size_t j = 0; j < m.cols() && column_criterion; ++j) {
      std::size_t big = 0;
      for (std::size_t i = 0; i < m.rows(); ++i)
        if (std::abs(m(i, j)) > tol) ++big;
      if (big > 1) column_criterion = false;
    }
    if (!column_criterion) break;
  }

  // Cross-check at small dimensions: a channel whose Kraus columns each have
  // single support must send basis projectors to diagonal states.
  if (column_criterion && k.in_dim <= 16) {
    for (std::size_t b = 0; b < k.in_dim; ++b) {
      ComplexMatrix proj(k.in_dim, k.in_dim);
      proj(b, b) = 1.0;
      const ComplexMatrix out = apply_linear(op, proj);
      for (std::size_t i = 0; i < out.rows(); ++i)
        for (std::size_t j = 0; j < out.cols(); ++j)
          if (i != j && std::abs(out(i, j)) > 1e-7) {
            throw NumericalError("incoherence column criterion disagrees with the "
                                 "basis-projector cross-check");
          }
    }
  }
  return column_criterion;
}

DilationResult stinespring_dilate(const QuantumOperation& op, std::size_t check_states) {
  const std::size_t d = op.in_dim();
  if (d == 0 || d != op.out_dim()) {
    throw ValidationError("dilation requires equal input and output dimensions");
  }
  const std::size_t ancilla = d * d;
  const std::size_t total = d * ancilla;

  std::vector<ComplexMatrix> kraus = to_kraus(op).ops;
  if (kraus.size() > ancilla) {
    throw ValidationError("channel has more than d^2 Kraus operators");
  }
  kraus.resize(ancilla, ComplexMatrix(d, d));  // pad with zero operators

  // Columns for inputs |i>(x)|0> are fixed by the Kraus family:
  // U(|i>(x)|0>) = sum_mu K_mu|i> (x) |mu>, flat row index j*ancilla + mu.
  ComplexMatrix u(total, total);
  std::vector<std::vector<Complex>> basis;
  basis.reserve(total);
  for (std::size_t i = 0; i < d; ++i) {
    std::vector<Complex> col(total, Complex(0.0, 0.0));
    for (std::size_t mu = 0; mu < ancilla; ++mu)
      for (std::size_t j = 0; j < d; ++j) col[j * ancilla + mu] = kraus[mu](j, i);
    for (std::size_t r = 0; r < total; ++r) u(r, i * ancilla) = col[r];
    basis.push_back(std::move(col));
  }

  // Complete the remaining columns from canonical basis vectors, two
  // projection passes each, in deterministic order.
  std::size_t candidate = 0;
  for (std::size_t slot = 0; slot < total; ++slot) {
    if (slot % ancilla == 0 && slot / ancilla < d) continue;  // fixed column
    bool placed = false;
    while (candidate < total && !placed) {
      std::vector<Complex> v(total, Complex(0.0, 0.0));
      v[candidate++] = 1.0;
      for (int pass = 0; pass < 2; ++pass) {
        for (const auto& b : basis) {
          Complex overlap = 0.0;
          for (std::size_t r = 0; r < total; ++r) overlap += std::conj(b[r]) * v[r];
          for (std::size_t r = 0; r < total; ++r) v[r] -= overlap * b[r];
        }
      }
      double norm2 = 0.0;
      for (const Complex& z : v) norm2 += std::norm(z);
      if (norm2 > 1e-12) {
        const double inv = 1.0 / std::sqrt(norm2);
        for (Complex& z : v) z *= inv;
        for (std::size_t r = 0; r < total; ++r) u(r, slot) = v[r];
        basis.push_back(std::move(v));
        placed = true;
      }
    }
    if (!placed) {
      throw NumericalError("isometry completion rank defect during dilation");
    }
  }

  if (unitarity_defect(u) > kUnitaryTol) {
    throw NumericalError("dilation unitary failed the unitarity post-condition");
  }

  DilationResult result;
  result.ancilla_dim = ancilla;
  result.ancilla_state.assign(ancilla, Complex(0.0, 0.0));
  result.ancilla_state[0] = 1.0;
  result.big_unitary = u;

  // Reconstruction check over seeded random states.
  ComplexMatrix psi_proj(ancilla, ancilla);
  psi_proj(0, 0) = 1.0;
  const SubsystemShape joint{{d, ancilla}};
  double worst = 0.0;
  for (std::size_t s = 0; s < check_states; ++s) {
    const DensityMatrix rho = random_density(0x51A7E5u + s, d);
    const ComplexMatrix direct = apply_linear(op, rho.mat());
    const ComplexMatrix lifted = u * tensor(rho.mat(), psi_proj) * adjoint(u);
    const ComplexMatrix reduced = partial_trace(lifted, joint, {0});
    worst = std::max(worst, max_abs_diff(direct, reduced));
  }
  result.reconstruction_error = worst;
  if (worst > 1e-8) {
    throw NumericalError("dilation reconstruction error " + std::to_string(worst) +
                         " exceeds 1e-8");
  }
  return result;
}

}  // namespace qcp
