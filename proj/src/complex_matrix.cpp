#include "qcp/complex_matrix.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace qcp {

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), entries_(rows * cols, Complex(0.0, 0.0)) {
  if (rows == 0 || cols == 0) {
    throw ValidationError("matrix dimensions must be positive");
  }
}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (rows == 0 || cols == 0) {
    throw ValidationError("matrix dimensions must be positive");
  }
  if (entries_.size() != rows * cols) {
    throw ValidationError("entry count does not match rows*cols");
  }
}

ComplexMatrix ComplexMatrix::identity(std::size_t d) {
  ComplexMatrix m(d, d);
  for (std::size_t i = 0; i < d; ++i) m(i, i) = 1.0;
  return m;
}

bool ComplexMatrix::all_finite() const {
  for (const Complex& z : entries_) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  }
  return true;
}

std::size_t SubsystemShape::total() const {
  std::size_t t = 1;
  for (std::size_t d : dims) {
    if (d == 0) throw ValidationError("subsystem dimension must be positive");
    t *= d;
  }
  return t;
}

namespace {

void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ValidationError("matrix shape mismatch");
  }
}

}  // namespace

ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_shape(a, b);
  ComplexMatrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j) + b(i, j);
  return out;
}

ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_shape(a, b);
  ComplexMatrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j) - b(i, j);
  return out;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) throw ValidationError("matrix product dimension mismatch");
  ComplexMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Complex aik = a(i, k);
      if (aik == Complex(0.0, 0.0)) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  }
  return out;
}

ComplexMatrix operator*(Complex s, const ComplexMatrix& a) {
  ComplexMatrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = s * a(i, j);
  return out;
}

ComplexMatrix adjoint(const ComplexMatrix& m) {
  ComplexMatrix out(m.cols(), m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(j, i) = std::conj(m(i, j));
  return out;
}

Complex trace(const ComplexMatrix& m) {
  if (!m.is_square()) throw ValidationError("trace requires a square matrix");
  Complex t = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i) t += m(i, i);
  return t;
}

double max_abs(const ComplexMatrix& m) {
  double mx = 0.0;
  for (const Complex& z : m.entries()) mx = std::max(mx, std::abs(z));
  return mx;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_shape(a, b);
  double mx = 0.0;
  for (std::size_t i = 0; i < a.entries().size(); ++i)
    mx = std::max(mx, std::abs(a.entries()[i] - b.entries()[i]));
  return mx;
}

double hermiticity_defect(const ComplexMatrix& m) {
  if (!m.is_square()) throw ValidationError("hermiticity defect requires a square matrix");
  double mx = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j <= i; ++j)
      mx = std::max(mx, std::abs(m(i, j) - std::conj(m(j, i))));
  return mx;
}

double unitarity_defect(const ComplexMatrix& m) {
  if (!m.is_square()) throw ValidationError("unitarity defect requires a square matrix");
  return max_abs_diff(adjoint(m) * m, ComplexMatrix::identity(m.rows()));
}

bool is_hermitian(const ComplexMatrix& m, double tol) {
  return m.is_square() && hermiticity_defect(m) <= tol;
}

bool is_unitary(const ComplexMatrix& m, double tol) {
  return m.is_square() && unitarity_defect(m) <= tol;
}

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.empty() || b.empty()) throw ValidationError("tensor of empty matrix");
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const Complex aij = a(i, j);
      if (aij == Complex(0.0, 0.0)) continue;
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l)
          out(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
    }
  return out;
}

ComplexMatrix tensor(const std::vector<ComplexMatrix>& factors) {
  if (factors.empty()) throw ValidationError("tensor of empty factor list");
  ComplexMatrix out = factors.front();
  for (std::size_t i = 1; i < factors.size(); ++i) out = tensor(out, factors[i]);
  return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& m, const SubsystemShape& shape,
                            const std::vector<std::size_t>& keep) {
  if (!m.is_square()) throw ValidationError("partial trace requires a square matrix");
  const std::size_t n = shape.size();
  if (n == 0 || shape.total() != m.rows()) {
    throw ValidationError("subsystem shape does not match matrix dimension");
  }
  std::vector<bool> kept(n, false);
  for (std::size_t k : keep) {
    if (k >= n) throw ValidationError("keep index out of range");
    if (kept[k]) throw ValidationError("duplicate keep index");
    kept[k] = true;
  }

  // Flat-index strides, most significant factor first.
  std::vector<std::size_t> stride(n, 1);
  for (std::size_t i = n; i-- > 1;) stride[i - 1] = stride[i] * shape.dims[i];

  std::vector<std::size_t> keep_idx, traced_idx;
  for (std::size_t i = 0; i < n; ++i) (kept[i] ? keep_idx : traced_idx).push_back(i);

  std::size_t keep_dim = 1, traced_dim = 1;
  for (std::size_t i : keep_idx) keep_dim *= shape.dims[i];
  for (std::size_t i : traced_idx) traced_dim *= shape.dims[i];

  // Base offset of a composite index over the listed factors: decompose the
  // composite value into digits (big-endian over the list) and weight each by
  // the full-matrix stride of its factor.
  auto offset = [&](std::size_t value, const std::vector<std::size_t>& factors) {
    std::size_t off = 0;
    for (std::size_t i = factors.size(); i-- > 0;) {
      const std::size_t f = factors[i];
      off += (value % shape.dims[f]) * stride[f];
      value /= shape.dims[f];
    }
    return off;
  };

  std::vector<std::size_t> keep_offset(keep_dim), traced_offset(traced_dim);
  for (std::size_t r = 0; r < keep_dim; ++r) keep_offset[r] = offset(r, keep_idx);
  for (std::size_t t = 0; t < traced_dim; ++t) traced_offset[t] = offset(t, traced_idx);

  ComplexMatrix out(keep_dim, keep_dim);
  for (std::size_t r = 0; r < keep_dim; ++r)
    for (std::size_t c = 0; c < keep_dim; ++c) {
      Complex acc = 0.0;
      for (std::size_t t = 0; t < traced_dim; ++t)
        acc += m(keep_offset[r] + traced_offset[t], keep_offset[c] + traced_offset[t]);
      out(r, c) = acc;
    }
  return out;
}

namespace {

Eigen::MatrixXcd to_eigen(const ComplexMatrix& m) {
  Eigen::MatrixXcd out(static_cast<Eigen::Index>(m.rows()), static_cast<Eigen::Index>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m(i, j);
  return out;
}

void require_hermitian_input(const ComplexMatrix& m) {
  if (!m.is_square()) throw ValidationError("eigendecomposition requires a square matrix");
  if (!m.all_finite()) throw ValidationError("matrix has non-finite entries");
  const double defect = hermiticity_defect(m);
  if (defect > kHermitianTol) {
    throw ValidationError("matrix is not Hermitian (defect " + std::to_string(defect) + ")");
  }
}

}  // namespace

std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m) {
  require_hermitian_input(m);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(to_eigen(m),
                                                         Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("Hermitian eigenvalue solver failed to converge");
  }
  std::vector<double> vals(solver.eigenvalues().data(),
                           solver.eigenvalues().data() + m.rows());
  std::sort(vals.begin(), vals.end(), std::greater<>());

  const double sum = std::accumulate(vals.begin(), vals.end(), 0.0);
  if (std::abs(sum - trace(m).real()) > kTraceTol * std::max(1.0, std::abs(sum))) {
    throw NumericalError("eigenvalue sum deviates from trace");
  }
  return vals;
}

HermitianEigensystem hermitian_eigensystem(const ComplexMatrix& m) {
  require_hermitian_input(m);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(to_eigen(m));
  if (solver.info() != Eigen::Success) {
    throw NumericalError("Hermitian eigenvalue solver failed to converge");
  }
  const std::size_t d = m.rows();
  HermitianEigensystem out;
  out.values.resize(d);
  out.vectors = ComplexMatrix(d, d);
  // Eigen returns ascending order; flip to descending.
  for (std::size_t j = 0; j < d; ++j) {
    const Eigen::Index src = static_cast<Eigen::Index>(d - 1 - j);
    out.values[j] = solver.eigenvalues()(src);
    for (std::size_t i = 0; i < d; ++i)
      out.vectors(i, j) = solver.eigenvectors()(static_cast<Eigen::Index>(i), src);
  }
  return out;
}

double one_to_one_norm(const ComplexMatrix& m) {
  if (m.empty()) throw ValidationError("norm of empty matrix");
  double best = 0.0;
  for (std::size_t j = 0; j < m.cols(); ++j) {
    double col = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i) col += std::abs(m(i, j));
    best = std::max(best, col);
  }
  return best;
}

ComplexMatrix nearest_unitary(const ComplexMatrix& m) {
  if (!m.is_square()) throw ValidationError("polar decomposition requires a square matrix");
  const HermitianEigensystem sys = hermitian_eigensystem(adjoint(m) * m);
  const double lambda_max = sys.values.front();
  if (lambda_max <= 0.0 || sys.values.back() <= 1e-14 * lambda_max) {
    throw ValidationError("nearest_unitary: input is singular");
  }
  // m (m^dagger m)^{-1/2} = m V diag(1/sqrt(lambda)) V^dagger
  const std::size_t d = m.rows();
  ComplexMatrix inv_sqrt(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      Complex acc = 0.0;
      for (std::size_t k = 0; k < d; ++k)
        acc += sys.vectors(i, k) * std::conj(sys.vectors(j, k)) / std::sqrt(sys.values[k]);
      inv_sqrt(i, j) = acc;
    }
  ComplexMatrix u = m * inv_sqrt;
  if (unitarity_defect(u) > 1e-12) {
    throw NumericalError("polar factor failed the unitarity post-condition");
  }
  return u;
}

}  // namespace qcp
