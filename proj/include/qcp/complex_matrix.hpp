#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "qcp/errors.hpp"

namespace qcp {

using Complex = std::complex<double>;

// Shared numerical tolerances. Dimensions stay small (<= ~2^10), so 64-bit
// floats leave ample headroom at these thresholds.
inline constexpr double kHermitianTol = 1e-9;
inline constexpr double kTraceTol = 1e-9;
inline constexpr double kUnitaryTol = 1e-9;
inline constexpr double kEigenvalueFloor = -1e-9;
inline constexpr double kIncoherenceTol = 1e-9;

// Dense rectangular complex matrix with row-major storage.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols);  // zero-filled
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);

  static ComplexMatrix identity(std::size_t d);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return entries_.empty(); }
  bool is_square() const { return rows_ == cols_ && rows_ > 0; }

  Complex& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
  const Complex& operator()(std::size_t i, std::size_t j) const {
    return entries_[i * cols_ + j];
  }

  const std::vector<Complex>& entries() const { return entries_; }

  bool all_finite() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> entries_;
};

// Ordered local dimensions of a tensor factorization. The first factor is the
// most significant index block: |k1 k2 ... kN> maps to the flat index
// sum_i k_i * prod_{j>i} d_j.
struct SubsystemShape {
  std::vector<std::size_t> dims;

  std::size_t total() const;
  std::size_t size() const { return dims.size(); }
};

ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(Complex s, const ComplexMatrix& a);

ComplexMatrix adjoint(const ComplexMatrix& m);
Complex trace(const ComplexMatrix& m);
double max_abs(const ComplexMatrix& m);
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

double hermiticity_defect(const ComplexMatrix& m);  // max |m - m^dagger| entrywise
double unitarity_defect(const ComplexMatrix& m);    // max |m^dagger m - I| entrywise
bool is_hermitian(const ComplexMatrix& m, double tol = kHermitianTol);
bool is_unitary(const ComplexMatrix& m, double tol = kUnitaryTol);

// Kronecker product: (a (x) b)[(i*rb + k), (j*cb + l)] = a[i,j] * b[k,l].
ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix tensor(const std::vector<ComplexMatrix>& factors);

// Partial trace over the factors NOT listed in `keep`; kept factors stay in
// their original order. An empty `keep` set yields the 1x1 matrix [tr m].
ComplexMatrix partial_trace(const ComplexMatrix& m, const SubsystemShape& shape,
                            const std::vector<std::size_t>& keep);

// Real spectrum of a Hermitian matrix, sorted descending. The input must be
// Hermitian within kHermitianTol.
std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m);

struct HermitianEigensystem {
  std::vector<double> values;  // descending
  ComplexMatrix vectors;       // column j is the eigenvector of values[j]
};
HermitianEigensystem hermitian_eigensystem(const ComplexMatrix& m);

// Induced 1->1 norm: maximum absolute column sum.
double one_to_one_norm(const ComplexMatrix& m);

// Unitary factor of the polar decomposition of a nonsingular square matrix.
ComplexMatrix nearest_unitary(const ComplexMatrix& m);

}  // namespace qcp
