#include "qcp/coherence.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace qcp {

namespace {

ComplexMatrix symmetrized(const ComplexMatrix& m) {
  ComplexMatrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      out(i, j) = 0.5 * (m(i, j) + std::conj(m(j, i)));
  return out;
}

}  // namespace

DensityMatrix::DensityMatrix(ComplexMatrix m) : mat_(std::move(m)) {
  if (!mat_.is_square()) throw ValidationError("density matrix must be square");
  if (!mat_.all_finite()) throw ValidationError("density matrix has non-finite entries");
  const double hdef = hermiticity_defect(mat_);
  if (hdef > kHermitianTol) {
    throw ValidationError("density matrix is not Hermitian (defect " + std::to_string(hdef) +
                          ")");
  }
  const Complex tr = trace(mat_);
  if (std::abs(tr - Complex(1.0, 0.0)) > kTraceTol) {
    throw ValidationError("density matrix trace deviates from one");
  }
  const std::vector<double> eigs = hermitian_eigenvalues(mat_);
  if (eigs.back() < kEigenvalueFloor) {
    throw ValidationError("density matrix has a negative eigenvalue (" +
                          std::to_string(eigs.back()) + ")");
  }
}

DensityMatrix DensityMatrix::from_factor(const ComplexMatrix& g) {
  ComplexMatrix r = g * adjoint(g);
  const double tr = trace(r).real();
  if (!(tr > 1e-12) || !r.all_finite()) {
    throw ValidationError("factor parameterization is degenerate");
  }
  r = Complex(1.0 / tr, 0.0) * r;
  return DensityMatrix(symmetrized(r), Trusted{});
}

DensityMatrix DensityMatrix::from_channel_output(ComplexMatrix m) {
  if (!m.is_square()) throw NumericalError("channel output is not square");
  if (hermiticity_defect(m) > kHermitianTol) {
    throw NumericalError("channel output drifted from Hermitian");
  }
  if (std::abs(trace(m) - Complex(1.0, 0.0)) > kTraceTol) {
    throw NumericalError("channel output trace deviates from one");
  }
  return DensityMatrix(symmetrized(m), Trusted{});
}

DensityMatrix DensityMatrix::sanitized(const ComplexMatrix& m) {
  if (!m.is_square()) throw ValidationError("density matrix must be square");
  const HermitianEigensystem sys = hermitian_eigensystem(symmetrized(m));
  const std::size_t d = m.rows();
  double total = 0.0;
  std::vector<double> clipped(d);
  for (std::size_t k = 0; k < d; ++k) {
    clipped[k] = std::max(sys.values[k], 0.0);
    total += clipped[k];
  }
  if (!(total > 0.0)) throw ValidationError("sanitized matrix has no positive weight");
  ComplexMatrix r(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      Complex acc = 0.0;
      for (std::size_t k = 0; k < d; ++k)
        acc += sys.vectors(i, k) * std::conj(sys.vectors(j, k)) * (clipped[k] / total);
      r(i, j) = acc;
    }
  return DensityMatrix(symmetrized(r), Trusted{});
}

DensityMatrix DensityMatrix::basis_state(std::size_t dim, std::size_t k) {
  if (dim == 0 || k >= dim) throw ValidationError("basis index out of range");
  ComplexMatrix m(dim, dim);
  m(k, k) = 1.0;
  return DensityMatrix(std::move(m), Trusted{});
}

DensityMatrix DensityMatrix::pure_state(const std::vector<Complex>& amplitudes) {
  const std::size_t d = amplitudes.size();
  if (d == 0) throw ValidationError("empty amplitude vector");
  double norm2 = 0.0;
  for (const Complex& a : amplitudes) norm2 += std::norm(a);
  if (!(norm2 > 0.0) || !std::isfinite(norm2)) {
    throw ValidationError("amplitude vector is not normalizable");
  }
  ComplexMatrix m(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      m(i, j) = amplitudes[i] * std::conj(amplitudes[j]) / norm2;
  return DensityMatrix(std::move(m), Trusted{});
}

DensityMatrix DensityMatrix::maximally_mixed(std::size_t dim) {
  if (dim == 0) throw ValidationError("dimension must be positive");
  ComplexMatrix m(dim, dim);
  for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0 / static_cast<double>(dim);
  return DensityMatrix(std::move(m), Trusted{});
}

double shannon_entropy_bits(const std::vector<double>& p) {
  double h = 0.0;
  for (double w : p) {
    if (w < kEigenvalueFloor) {
      throw ValidationError("probability weight below the eigenvalue floor (" +
                            std::to_string(w) + ")");
    }
    if (w > 0.0) h -= w * std::log2(w);
  }
  return h;
}

double von_neumann_entropy_bits(const DensityMatrix& rho) {
  return shannon_entropy_bits(hermitian_eigenvalues(rho.mat()));
}

DensityMatrix dephase(const DensityMatrix& rho) {
  const std::size_t d = rho.dim();
  ComplexMatrix m(d, d);
  for (std::size_t i = 0; i < d; ++i) m(i, i) = rho.mat()(i, i).real();
  return DensityMatrix(std::move(m));
}

double c_l1(const DensityMatrix& rho) {
  double s = 0.0;
  const std::size_t d = rho.dim();
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      if (i != j) s += std::abs(rho.mat()(i, j));
  return s;
}

double c_r(const DensityMatrix& rho) {
  // An exactly diagonal state is its own dephasing; skip the eigensolver and
  // its rounding noise.
  bool diagonal = true;
  for (std::size_t i = 0; i < rho.dim() && diagonal; ++i)
    for (std::size_t j = 0; j < rho.dim(); ++j)
      if (i != j && rho.mat()(i, j) != Complex(0.0, 0.0)) {
        diagonal = false;
        break;
      }
  if (diagonal) return 0.0;

  std::vector<double> diag(rho.dim());
  for (std::size_t i = 0; i < rho.dim(); ++i) diag[i] = rho.mat()(i, i).real();
  const double value = shannon_entropy_bits(diag) - von_neumann_entropy_bits(rho);
  if (value < 0.0) {
    if (value < kEigenvalueFloor) {
      throw NumericalError("relative entropy of coherence came out negative (" +
                           std::to_string(value) + ")");
    }
    return 0.0;
  }
  return value;
}

bool is_incoherent_state(const DensityMatrix& rho, double tol) {
  if (!(tol > 0.0)) throw ValidationError("incoherence tolerance must be positive");
  const std::size_t d = rho.dim();
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      if (i != j && std::abs(rho.mat()(i, j)) > tol) return false;
  return true;
}

double coherence(const DensityMatrix& rho, CoherenceMeasure measure) {
  return measure == CoherenceMeasure::L1 ? c_l1(rho) : c_r(rho);
}

const char* measure_name(CoherenceMeasure measure) {
  return measure == CoherenceMeasure::L1 ? "l1" : "relent";
}

}  // namespace qcp
