#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qcp/coherence.hpp"
#include "qcp/complex_matrix.hpp"

namespace qcp {

// SplitMix64: 64-bit counter-based generator (golden-ratio Weyl sequence with
// a finalizer mix). Streams split deterministically by index, so results do
// not depend on evaluation order.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  static SplitMix64 stream(std::uint64_t seed, std::uint64_t stream_index);

  std::uint64_t next();
  double uniform();  // [0, 1)
  double normal();   // standard normal via Box-Muller

 private:
  std::uint64_t state_;
  bool has_cached_ = false;
  double cached_ = 0.0;
};

// d x d matrix of i.i.d. standard complex Gaussian entries.
ComplexMatrix ginibre(SplitMix64& rng, std::size_t rows, std::size_t cols);

DensityMatrix random_density(SplitMix64& rng, std::size_t dim);
DensityMatrix random_density(std::uint64_t seed, std::size_t dim);

// Haar-distributed unitary: QR of a Ginibre draw with the positive-diagonal-R
// convention. Unitarity defect at most 1e-12.
ComplexMatrix random_unitary(SplitMix64& rng, std::size_t dim);
ComplexMatrix random_unitary(std::uint64_t seed, std::size_t dim);

// Random CPTP channel: a Haar isometry from C^d to C^{d * kraus_count} sliced
// into d x d blocks.
std::vector<ComplexMatrix> random_kraus_channel(SplitMix64& rng, std::size_t dim,
                                                std::size_t kraus_count);

struct OptimizerConfig {
  std::size_t restarts = 32;
  std::size_t max_iterations = 2000;
  double step_tolerance = 1e-8;
  double objective_tolerance = 1e-9;
  std::uint64_t seed = 0;
  enum class Parameterization { FullFactor } parameterization = Parameterization::FullFactor;
  bool include_basis_starts = true;
};

struct RestartTrace {
  std::size_t index = 0;
  bool basis_start = false;
  std::size_t iterations = 0;
  double final_value = 0.0;
  bool converged = false;
  bool aborted = false;               // objective returned a non-finite value
  std::vector<double> best_history;   // best simplex value after each iteration
};

struct OptResult {
  double best_value = 0.0;
  std::optional<DensityMatrix> best_state;
  std::vector<RestartTrace> restarts;
  bool converged = false;
};

// Derivative-free multistart maximization over the density-matrix set, using
// the unconstrained factor parameterization rho = G G^dagger / tr. Every
// evaluated candidate is a valid state by construction. With basis starts
// enabled each computational basis state is also evaluated directly, so the
// result is never below the best basis value. Deterministic per seed.
OptResult maximize_over_states(const std::function<double(const DensityMatrix&)>& objective,
                               std::size_t dim, const OptimizerConfig& cfg);

}  // namespace qcp
