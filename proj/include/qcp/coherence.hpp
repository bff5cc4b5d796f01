#pragma once

#include <cstddef>
#include <vector>

#include "qcp/complex_matrix.hpp"

namespace qcp {

enum class CoherenceMeasure { L1, RelativeEntropy };

// Validated quantum state: Hermitian within kHermitianTol, eigenvalues no
// smaller than kEigenvalueFloor, trace within kTraceTol of one. The reference
// basis is permanently the computational basis; analyze another basis by
// conjugating with the basis-change unitary before constructing.
class DensityMatrix {
 public:
  // Full validation, including the eigenvalue floor.
  explicit DensityMatrix(ComplexMatrix m);

  // rho = G G^dagger / tr(G G^dagger). Positive semidefinite and unit trace
  // by construction; only rounding symmetrization is applied.
  static DensityMatrix from_factor(const ComplexMatrix& g);

  // Wraps the output of a trace-preserving map without the eigenvalue check.
  static DensityMatrix from_channel_output(ComplexMatrix m);

  // Symmetrizes, clips negative eigenvalues to zero and renormalizes the
  // trace. Intended for matrices printed at low precision.
  static DensityMatrix sanitized(const ComplexMatrix& m);

  static DensityMatrix basis_state(std::size_t dim, std::size_t k);
  static DensityMatrix pure_state(const std::vector<Complex>& amplitudes);
  static DensityMatrix maximally_mixed(std::size_t dim);

  std::size_t dim() const { return mat_.rows(); }
  const ComplexMatrix& mat() const { return mat_; }

 private:
  struct Trusted {};
  DensityMatrix(ComplexMatrix m, Trusted) : mat_(std::move(m)) {}

  ComplexMatrix mat_;
};

// Shannon entropy in bits with the 0 log 0 = 0 convention. Weights in
// [kEigenvalueFloor, 0) count as zero; anything lower is an error.
double shannon_entropy_bits(const std::vector<double>& p);

double von_neumann_entropy_bits(const DensityMatrix& rho);

// Deletes all off-diagonal entries.
DensityMatrix dephase(const DensityMatrix& rho);

// Sum of absolute values of the off-diagonal entries.
double c_l1(const DensityMatrix& rho);

// Entropy of the dephased state minus entropy of the state, in bits.
// Clamped to zero when negative within kHermitianTol rounding.
double c_r(const DensityMatrix& rho);

bool is_incoherent_state(const DensityMatrix& rho, double tol = kIncoherenceTol);

double coherence(const DensityMatrix& rho, CoherenceMeasure measure);

const char* measure_name(CoherenceMeasure measure);

}  // namespace qcp
