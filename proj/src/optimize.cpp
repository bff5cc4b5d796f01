#include "qcp/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

namespace qcp {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace

SplitMix64 SplitMix64::stream(std::uint64_t seed, std::uint64_t stream_index) {
  return SplitMix64(mix64(seed + (stream_index + 1) * kGolden));
}

std::uint64_t SplitMix64::next() {
  state_ += kGolden;
  return mix64(state_);
}

double SplitMix64::uniform() {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

double SplitMix64::normal() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_;
  }
  // u1 in (0, 1] so the logarithm is finite.
  const double u1 = (static_cast<double>(next() >> 11) + 1.0) * 0x1.0p-53;
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  cached_ = r * std::sin(angle);
  has_cached_ = true;
  return r * std::cos(angle);
}

ComplexMatrix ginibre(SplitMix64& rng, std::size_t rows, std::size_t cols) {
  ComplexMatrix g(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) {
      const double re = rng.normal();
      const double im = rng.normal();
      g(i, j) = Complex(re, im);
    }
  return g;
}

DensityMatrix random_density(SplitMix64& rng, std::size_t dim) {
  if (dim == 0) throw ValidationError("dimension must be positive");
  return DensityMatrix::from_factor(ginibre(rng, dim, dim));
}

DensityMatrix random_density(std::uint64_t seed, std::size_t dim) {
  SplitMix64 rng = SplitMix64::stream(seed, 0xD57A7Eull);
  return random_density(rng, dim);
}

namespace {

// Two-pass modified Gram-Schmidt on the columns. Returns false on rank defect.
bool orthonormalize_columns(ComplexMatrix& m) {
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  for (std::size_t j = 0; j < cols; ++j) {
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t k = 0; k < j; ++k) {
        Complex overlap = 0.0;
        for (std::size_t i = 0; i < rows; ++i) overlap += std::conj(m(i, k)) * m(i, j);
        for (std::size_t i = 0; i < rows; ++i) m(i, j) -= overlap * m(i, k);
      }
    }
    double norm2 = 0.0;
    for (std::size_t i = 0; i < rows; ++i) norm2 += std::norm(m(i, j));
    if (!(norm2 > 1e-24)) return false;
    const double inv = 1.0 / std::sqrt(norm2);
    for (std::size_t i = 0; i < rows; ++i) m(i, j) *= inv;
  }
  return true;
}

}  // namespace

ComplexMatrix random_unitary(SplitMix64& rng, std::size_t dim) {
  if (dim == 0) throw ValidationError("dimension must be positive");
  ComplexMatrix q = ginibre(rng, dim, dim);
  if (!orthonormalize_columns(q)) {
    throw NumericalError("Ginibre draw was numerically rank deficient");
  }
  if (unitarity_defect(q) > 1e-12) {
    throw NumericalError("random unitary failed the defect post-condition");
  }
  return q;
}

ComplexMatrix random_unitary(std::uint64_t seed, std::size_t dim) {
  SplitMix64 rng = SplitMix64::stream(seed, 0x0A11ull);
  return random_unitary(rng, dim);
}

std::vector<ComplexMatrix> random_kraus_channel(SplitMix64& rng, std::size_t dim,
                                                std::size_t kraus_count) {
  if (dim == 0 || kraus_count == 0) throw ValidationError("dimensions must be positive");
  ComplexMatrix iso = ginibre(rng, dim * kraus_count, dim);
  if (!orthonormalize_columns(iso)) {
    throw NumericalError("Ginibre draw was numerically rank deficient");
  }
  std::vector<ComplexMatrix> ops;
  ops.reserve(kraus_count);
  for (std::size_t mu = 0; mu < kraus_count; ++mu) {
    ComplexMatrix k(dim, dim);
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = 0; j < dim; ++j) k(i, j) = iso(mu * dim + i, j);
    ops.push_back(std::move(k));
  }
  return ops;
}

namespace {

// Factor parameterization: 2 d^2 reals, Re(G) row-major then Im(G).
DensityMatrix state_of(const std::vector<double>& x, std::size_t d) {
  ComplexMatrix g(d, d);
  const std::size_t n = d * d;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) g(i, j) = Complex(x[i * d + j], x[n + i * d + j]);
  return DensityMatrix::from_factor(g);
}

struct NelderMeadOutcome {
  double best_value = -std::numeric_limits<double>::infinity();
  std::vector<double> best_x;
  std::size_t iterations = 0;
  bool converged = false;
  bool aborted = false;
  std::vector<double> best_history;
};

// Standard simplex search (reflection 1, expansion 2, contraction 0.5,
// shrink 0.5), maximizing. The objective is non-smooth along the l1 loci, so
// no derivatives are assumed anywhere.
NelderMeadOutcome nelder_mead_maximize(const std::function<double(const std::vector<double>&)>& f,
                                       const std::vector<double>& x0,
                                       const OptimizerConfig& cfg) {
  const std::size_t n = x0.size();
  NelderMeadOutcome out;

  std::vector<std::vector<double>> simplex;
  simplex.reserve(n + 1);
  simplex.push_back(x0);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> v = x0;
    v[i] += 0.1;
    simplex.push_back(std::move(v));
  }
  std::vector<double> values(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    values[i] = f(simplex[i]);
    if (!std::isfinite(values[i])) {
      out.aborted = true;
      return out;
    }
  }

  std::vector<std::size_t> order(n + 1);
  for (std::size_t it = 0; it < cfg.max_iterations; ++it) {
    out.iterations = it + 1;
    out.best_history.push_back(*std::max_element(values.begin(), values.end()));
    for (std::size_t i = 0; i <= n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });

    const std::size_t best = order[0];
    const std::size_t worst = order[n];
    const std::size_t second_worst = order[n - 1];

    double value_spread = values[best] - values[worst];
    double x_spread = 0.0;
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == best) continue;
      for (std::size_t j = 0; j < n; ++j)
        x_spread = std::max(x_spread, std::abs(simplex[i][j] - simplex[best][j]));
    }
    if (value_spread <= cfg.objective_tolerance || x_spread <= cfg.step_tolerance) {
      out.converged = true;
      break;
    }

    std::vector<double> centroid(n, 0.0);
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == worst) continue;
      for (std::size_t j = 0; j < n; ++j) centroid[j] += simplex[i][j];
    }
    for (double& c : centroid) c /= static_cast<double>(n);

    auto blend = [&](double t) {
      std::vector<double> v(n);
      for (std::size_t j = 0; j < n; ++j)
        v[j] = centroid[j] + t * (centroid[j] - simplex[worst][j]);
      return v;
    };

    std::vector<double> reflected = blend(1.0);
    const double fr = f(reflected);
    if (!std::isfinite(fr)) {
      out.aborted = true;
      break;
    }

    if (fr > values[best]) {
      std::vector<double> expanded = blend(2.0);
      const double fe = f(expanded);
      if (!std::isfinite(fe)) {
        out.aborted = true;
        break;
      }
      if (fe > fr) {
        simplex[worst] = std::move(expanded);
        values[worst] = fe;
      } else {
        simplex[worst] = std::move(reflected);
        values[worst] = fr;
      }
    } else if (fr > values[second_worst]) {
      simplex[worst] = std::move(reflected);
      values[worst] = fr;
    } else {
      std::vector<double> contracted = blend(-0.5);
      const double fc = f(contracted);
      if (!std::isfinite(fc)) {
        out.aborted = true;
        break;
      }
      if (fc > values[worst]) {
        simplex[worst] = std::move(contracted);
        values[worst] = fc;
      } else {
        for (std::size_t i = 0; i <= n; ++i) {
          if (i == best) continue;
          for (std::size_t j = 0; j < n; ++j)
            simplex[i][j] = simplex[best][j] + 0.5 * (simplex[i][j] - simplex[best][j]);
          values[i] = f(simplex[i]);
          if (!std::isfinite(values[i])) {
            out.aborted = true;
            break;
          }
        }
        if (out.aborted) break;
      }
    }
  }

  std::size_t best_idx = 0;
  for (std::size_t i = 1; i <= n; ++i)
    if (values[i] > values[best_idx]) best_idx = i;
  out.best_value = values[best_idx];
  out.best_x = simplex[best_idx];
  return out;
}

}  // namespace

OptResult maximize_over_states(const std::function<double(const DensityMatrix&)>& objective,
                               std::size_t dim, const OptimizerConfig& cfg) {
  if (dim < 2) throw ValidationError("optimization dimension must be at least 2");
  if (cfg.restarts == 0 || cfg.max_iterations == 0) {
    throw ValidationError("restart and iteration counts must be positive");
  }
  if (!(cfg.step_tolerance > 0.0) || !(cfg.objective_tolerance > 0.0)) {
    throw ValidationError("tolerances must be positive");
  }

  const std::size_t n = 2 * dim * dim;
  OptResult result;
  result.best_value = -std::numeric_limits<double>::infinity();

  auto consider = [&](double value, const DensityMatrix& state) {
    if (std::isfinite(value) && value > result.best_value) {
      result.best_value = value;
      result.best_state = state;
    }
  };

  // Exact basis states are always feasible; evaluating them directly pins the
  // result at or above the best basis value.
  if (cfg.include_basis_starts) {
    for (std::size_t k = 0; k < dim; ++k) {
      const DensityMatrix basis = DensityMatrix::basis_state(dim, k);
      consider(objective(basis), basis);
    }
  }

  bool all_converged = true;
  for (std::size_t r = 0; r < cfg.restarts; ++r) {
    std::vector<double> x0(n, 0.0);
    const bool basis_start = cfg.include_basis_starts && r < dim;
    if (basis_start) {
      // Rank-regularized basis factor G = |r><r| + 1e-6 I.
      for (std::size_t i = 0; i < dim; ++i) x0[i * dim + i] = 1e-6;
      x0[r * dim + r] = 1.0 + 1e-6;
    } else {
      SplitMix64 rng = SplitMix64::stream(cfg.seed, r);
      for (double& v : x0) v = rng.normal();
    }

    const auto wrapped = [&](const std::vector<double>& x) { return objective(state_of(x, dim)); };
    const NelderMeadOutcome nm = nelder_mead_maximize(wrapped, x0, cfg);

    RestartTrace tr;
    tr.index = r;
    tr.basis_start = basis_start;
    tr.iterations = nm.iterations;
    tr.converged = nm.converged;
    tr.aborted = nm.aborted;
    tr.final_value = nm.aborted ? std::numeric_limits<double>::quiet_NaN() : nm.best_value;
    tr.best_history = nm.best_history;
    result.restarts.push_back(tr);

    if (nm.aborted || !nm.converged) all_converged = false;
    if (!nm.aborted && !nm.best_x.empty()) consider(nm.best_value, state_of(nm.best_x, dim));
  }

  if (!result.best_state.has_value()) {
    throw NumericalError("every optimizer restart aborted");
  }
  result.converged = all_converged;
  return result;
}

}  // namespace qcp
