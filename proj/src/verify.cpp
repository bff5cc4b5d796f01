#include "qcp/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "qcp/optimize.hpp"
#include "qcp/serialize.hpp"

namespace qcp {

using nlohmann::json;

ComplexMatrix relent_gap_unitary_raw() {
  return ComplexMatrix(2, 2,
                       {Complex(0.5828, -0.8125), Complex(-0.0148, 0.0007),
                        Complex(-0.0125, -0.0080), Complex(-0.1021, -0.9947)});
}

ComplexMatrix relent_gap_state_raw() {
  return ComplexMatrix(2, 2,
                       {Complex(0.8706, 0.0), Complex(0.3078, 0.0527),
                        Complex(0.3078, -0.0527), Complex(0.1294, 0.0)});
}

ComplexMatrix relent_gap_unitary() { return nearest_unitary(relent_gap_unitary_raw()); }

DensityMatrix relent_gap_state() { return DensityMatrix::sanitized(relent_gap_state_raw()); }

const char* property_name(PropertyId id) {
  switch (id) {
    case PropertyId::EQ3_L1_TENSOR: return "EQ3_L1_TENSOR";
    case PropertyId::EQ4_RENT_TENSOR: return "EQ4_RENT_TENSOR";
    case PropertyId::P2_PRODUCT_BOUND: return "P2_PRODUCT_BOUND";
    case PropertyId::P2_TENSOR_EQUALITY: return "P2_TENSOR_EQUALITY";
    case PropertyId::CONTINUITY: return "CONTINUITY";
    case PropertyId::P3_COMPOSE_BOUND: return "P3_COMPOSE_BOUND";
    case PropertyId::P4_TENSOR_L1: return "P4_TENSOR_L1";
    case PropertyId::P5_TENSOR_RENT: return "P5_TENSOR_RENT";
    case PropertyId::P6_QUBIT_EQUALITY: return "P6_QUBIT_EQUALITY";
    case PropertyId::P7_COUNTEREXAMPLE: return "P7_COUNTEREXAMPLE";
    case PropertyId::P8_RATIO_EQUALITY: return "P8_RATIO_EQUALITY";
    case PropertyId::HADAMARD_MAXIMALITY: return "HADAMARD_MAXIMALITY";
  }
  return "?";
}

std::optional<PropertyId> parse_property_id(const std::string& name) {
  for (PropertyId id : kAllProperties) {
    if (name == property_name(id)) return id;
  }
  return std::nullopt;
}

double default_tolerance(PropertyId id) {
  switch (id) {
    case PropertyId::EQ3_L1_TENSOR:
      return 1e-10;
    case PropertyId::P6_QUBIT_EQUALITY:
    case PropertyId::P8_RATIO_EQUALITY:
      return 1e-4;
    case PropertyId::P7_COUNTEREXAMPLE:
      return 2e-3;
    default:
      return 1e-9;
  }
}

std::size_t default_trials(PropertyId id, VerifyProfile profile) {
  const bool full = profile == VerifyProfile::Full;
  switch (id) {
    case PropertyId::P7_COUNTEREXAMPLE:
      return 1;  // fixed instance
    case PropertyId::P6_QUBIT_EQUALITY:
      return full ? 100 : 20;  // optimizer-backed
    case PropertyId::P8_RATIO_EQUALITY:
      return full ? 50 : 10;  // optimizer-backed
    default:
      return full ? 1000 : 100;
  }
}

namespace {

struct CaseAccumulator {
  CaseReport report;

  explicit CaseAccumulator(const PropertyCase& c) {
    report.id = c.id;
    report.trials = c.trials;
    report.worst_margin = -std::numeric_limits<double>::infinity();
  }

  void record(double margin, bool strict_failure, const json& witness) {
    if (margin > report.worst_margin || report.worst_witness.empty()) {
      report.worst_margin = std::max(margin, report.worst_margin);
      report.worst_witness = witness.dump();
    }
    if (strict_failure) ++report.failures;
  }

  CaseReport finish(double tolerance) {
    report.passed = report.failures == 0 && report.worst_margin <= tolerance;
    return report;
  }
};

std::size_t pick(SplitMix64& rng, std::size_t lo, std::size_t hi) {
  return lo + static_cast<std::size_t>(rng.next() % (hi - lo + 1));
}

DensityMatrix tensor_state(const DensityMatrix& a, const DensityMatrix& b) {
  return DensityMatrix::from_channel_output(tensor(a.mat(), b.mat()));
}

// Random channel drawn over the four basic families; dimensions stay in {2, 3}.
QuantumOperation random_operation(SplitMix64& rng) {
  switch (rng.next() % 4) {
    case 0:
      return QuantumOperation::unitary(random_unitary(rng, pick(rng, 2, 3)));
    case 1: {
      const std::size_t d = pick(rng, 2, 3);
      return QuantumOperation::kraus(random_kraus_channel(rng, d, pick(rng, 1, d * d)));
    }
    case 2: {
      const std::size_t in = pick(rng, 2, 3);
      return QuantumOperation::append(random_density(rng, pick(rng, 2, 3)), in);
    }
    default: {
      const std::size_t da = pick(rng, 2, 3);
      const std::size_t db = pick(rng, 2, 3);
      return QuantumOperation::dismiss(SubsystemShape{{da, db}},
                                       {static_cast<std::size_t>(rng.next() % 2)});
    }
  }
}

OptimizerConfig case_optimizer_config(std::uint64_t seed) {
  OptimizerConfig cfg;
  cfg.seed = seed;
  return cfg;
}

CaseReport run_eq3(const PropertyCase& c) {
  CaseAccumulator acc(c);
  for (std::size_t t = 0; t < c.trials; ++t) {
    SplitMix64 rng = SplitMix64::stream(c.seed, t);
    const DensityMatrix rho = random_density(rng, pick(rng, 2, 4));
    const DensityMatrix sigma = random_density(rng, pick(rng, 2, 4));
    const double lhs = c_l1(tensor_state(rho, sigma)) + 1.0;
    const double rhs = (c_l1(rho) + 1.0) * (c_l1(sigma) + 1.0);
    const double margin = std::abs(lhs - rhs);
    acc.record(margin, margin > c.tolerance,
               json{{"trial", t},
                    {"rho", matrix_to_json(rho.mat())},
                    {"sigma", matrix_to_json(sigma.mat())},
                    {"lhs", lhs},
                    {"rhs", rhs}});
  }
  return acc.finish(c.tolerance);
}

CaseReport run_eq4(const PropertyCase& c) {
  CaseAccumulator acc(c);
  for (std::size_t t = 0; t < c.trials; ++t) {
    SplitMix64 rng = SplitMix64::stream(c.seed, t);
    const DensityMatrix rho = random_density(rng, pick(rng, 2, 4));
    const DensityMatrix sigma = random_density(rng, pick(rng, 2, 4));
    const double lhs = c_r(tensor_state(rho, sigma));
    const double rhs = c_r(rho) + c_r(sigma);
    const double margin = std::abs(lhs - rhs);
    acc.record(margin, margin > c.tolerance,
               json{{"trial", t},
                    {"rho", matrix_to_json(rho.mat())},
                    {"sigma", matrix_to_json(sigma.mat())},
                    {"lhs", lhs},
                    {"rhs", rhs}});
  }
  return acc.finish(c.tolerance);
}

CaseReport run_p2_product(const PropertyCase& c) {
  CaseAccumulator acc(c);
  for (std::size_t t = 0; t < c.trials; ++t) {
    SplitMix64 rng = SplitMix64::stream(c.seed, t);
    const std::size_t d = pick(rng, 2, 4);
    std::vector<ComplexMatrix> us;
    const std::size_t count = pick(rng, 2, 3);
    for (std::size_t i = 0; i < count; ++i) us.push_back(random_unitary(rng, d));
    const auto [bound, actual] = unitary_product_bound_l1(us);
    const double margin = actual - bound;
    json witness{{"trial", t}, {"bound", bound}, {"actual", actual}};
    json list = json::array();
    for (const auto& u : us) list.push_back(matrix_to_json(u));
    witness["unitaries"] = std::move(list);
    acc.record(margin, margin > c.tolerance, witness);
  }
  return acc.finish(c.tolerance);
}

CaseReport run_p2_tensor(const PropertyCase& c) {
  CaseAccumulator acc(c);
  for (std::size_t t = 0; t < c.trials; ++t) {
    std::vector<ComplexMatrix> us;
    if (t == 0) {
      us = {hadamard_gate(), hadamard_gate(), hadamard_gate()};
    } else {
      SplitMix64 rng = SplitMix64::stream(c.seed, t);
      const std::size_t count = pick(rng, 2, 3);
      for (std::size_t i = 0; i < count; ++i) us.push_back(random_unitary(rng, pick(rng, 2, 3)));
    }
    double rhs = 1.0;
    for (const auto& u : us) rhs *= unitary_power_l1(u) + 1.0;
    const double lhs = unitary_power_l1(tensor(us)) + 1.0;
    const double margin = std::abs(lhs - rhs);
    json witness{{"trial", t}, {"lhs", lhs}, {"rhs", rhs}};
    json list = json::array();
    for (const auto& u : us) list.push_back(matrix_to_json(u));
    witness["unitaries"] = std::move(list);
    acc.record(margin, margin > c.tolerance, witness);
  }
  return acc.finish(c.tolerance);
}

CaseReport run_continuity(const PropertyCase& c) {
  CaseAccumulator acc(c);
  const std::size_t dims[] = {2, 4, 8};
  for (std::size_t t = 0; t < c.trials; ++t) {
    SplitMix64 rng = SplitMix64::stream(c.seed, t);
    const std::size_t d = dims[rng.next() % 3];
    const ComplexMatrix u = random_unitary(rng, d);
    ComplexMatrix v;
    if (t % 2 == 0) {
      v = random_unitary(rng, d);
    } else {
      // Near pair: re-unitarize a small perturbation of u.
      const double eps = 1e-3 * (rng.uniform() + 1e-3);
      v = nearest_unitary(u + Complex(eps, 0.0) * ginibre(rng, d, d));
    }
    const auto [lhs, rhs] = continuity_gap(u, v);
    const double margin = lhs - rhs;
    acc.record(margin, margin > c.tolerance,
               json{{"trial", t},
                    {"u", matrix_to_json(u)},
                    {"v", matrix_to_json(v)},
                    {"lhs", lhs},
                    {"rhs", rhs}});
  }
  return acc.finish(c.tolerance);
}

CaseReport run_p3_compose(const PropertyCase& c) {
  CaseAccumulator acc(c);
  for (std::size_t t = 0; t < c.trials; ++t) {
    SplitMix64 rng = SplitMix64::stream(c.seed, t);
    QuantumOperation op1 = QuantumOperation::unitary(ComplexMatrix::identity(2));
    QuantumOperation op2 = op1;
    switch (t % 3) {
      case 0: {
        const std::size_t d = pick(rng, 2, 4);
        op1 = QuantumOperation::kraus(random_kraus_channel(rng, d, pick(rng, 1, d * d)));
        op2 = QuantumOperation::unitary(random_unitary(rng, d));
        break;
      }
      case 1: {
        const std::size_t d = pick(rng, 2, 3);
        op1 = QuantumOperation::kraus(random_kraus_channel(rng, d, pick(rng, 1, d * d)));
        op2 = QuantumOperation::append(random_density(rng, pick(rng, 2, 3)), d);
        break;
      }
      default: {
        const std::size_t da = pick(rng, 2, 3);
        const std::size_t db = pick(rng, 2, 3);
        const std::size_t d = da * db;
        op1 = QuantumOperation::kraus(random_kraus_channel(rng, d, pick(rng, 1, 4)));
        op2 = QuantumOperation::dismiss(SubsystemShape{{da, db}},
                                        {static_cast<std::size_t>(rng.next() % 2)});
        break;
      }
    }
    const auto [bound, actual] = composition_bound_l1(op2, op1);
    const double margin = actual - bound;
    acc.record(margin, margin > c.tolerance,
               json{{"trial", t},
                    {"op1", channel_to_json(op1)},
                    {"op2", channel_to_json(op2)},
                    {"bound", bound},
                    {"actual", actual}});
  }
  return acc.finish(c.tolerance);
}

CaseReport run_tensor_law(const PropertyCase& c, CoherenceMeasure measure) {
  CaseAccumulator acc(c);
  for (std::size_t t = 0; t < c.trials; ++t) {
    SplitMix64 rng = SplitMix64::stream(c.seed, t);
    const QuantumOperation op1 = random_operation(rng);
    const QuantumOperation op2 = random_operation(rng);
    const double s1 = cohering_power(op1, measure).s_value;
    const double s2 = cohering_power(op2, measure).s_value;
    const double s12 = tensor_power(op1, op2, measure);
    const double lhs = measure == CoherenceMeasure::L1 ? s12 + 1.0 : s12;
    const double rhs =
        measure == CoherenceMeasure::L1 ? (s1 + 1.0) * (s2 + 1.0) : s1 + s2;
    const double margin = std::abs(lhs - rhs);
    acc.record(margin, margin > c.tolerance,
               json{{"trial", t},
                    {"op1", channel_to_json(op1)},
                    {"op2", channel_to_json(op2)},
                    {"lhs", lhs},
                    {"rhs", rhs}});
  }
  return acc.finish(c.tolerance);
}

CaseReport run_p6(const PropertyCase& c) {
  CaseAccumulator acc(c);
  for (std::size_t t = 0; t < c.trials; ++t) {
    SplitMix64 rng = SplitMix64::stream(c.seed, t);
    const ComplexMatrix u = random_unitary(rng, 2);
    const double closed = unitary_power_l1(u);
    const PowerReport report = generalized_cohering_power(
        QuantumOperation::unitary(u), CoherenceMeasure::L1,
        case_optimizer_config(rng.next()));
    const double found = *report.s_hat_value;
    // Found gains are true lower bounds; exceeding the closed form would
    // falsify the qubit equality outright.
    const bool strict = found - closed > 1e-9;
    const double margin = closed - found;
    acc.record(margin, strict,
               json{{"trial", t},
                    {"u", matrix_to_json(u)},
                    {"s", closed},
                    {"s_hat", found}});
  }
  return acc.finish(c.tolerance);
}

CaseReport run_p7(const PropertyCase& c) {
  CaseAccumulator acc(c);
  const ComplexMatrix u = relent_gap_unitary();
  const DensityMatrix rho = relent_gap_state();

  const double s = unitary_power_relent(u);
  const DensityMatrix evolved =
      apply(QuantumOperation::unitary(u), rho);
  const double gain = c_r(evolved) - c_r(rho);

  const double margin = std::max(std::abs(s - 0.0030), std::abs(gain - 0.0190));
  const bool strict = !(gain > s);
  acc.record(margin, strict,
             json{{"u", matrix_to_json(u)},
                  {"rho", matrix_to_json(rho.mat())},
                  {"s", s},
                  {"gain", gain}});
  std::ostringstream detail;
  detail << "S_Cr=" << s << " gain=" << gain;
  acc.report.detail = detail.str();
  return acc.finish(c.tolerance);
}

CaseReport run_p8(const PropertyCase& c) {
  CaseAccumulator acc(c);
  for (std::size_t t = 0; t < c.trials; ++t) {
    SplitMix64 rng = SplitMix64::stream(c.seed, t);
    const ComplexMatrix u = random_unitary(rng, pick(rng, 2, 3));
    const double closed = unitary_power_l1(u);
    const double ratio = ratio_power_l1(u, case_optimizer_config(rng.next()));
    const bool strict = ratio - closed > 1e-6;
    const double margin = closed - ratio;
    acc.record(margin, strict,
               json{{"trial", t},
                    {"u", matrix_to_json(u)},
                    {"s", closed},
                    {"ratio", ratio}});
  }
  return acc.finish(c.tolerance);
}

CaseReport run_hadamard_max(const PropertyCase& c) {
  CaseAccumulator acc(c);
  for (std::size_t t = 0; t < c.trials; ++t) {
    SplitMix64 rng = SplitMix64::stream(c.seed, t);
    const std::size_t n = pick(rng, 1, 3);
    const std::size_t dim = std::size_t{1} << n;
    const ComplexMatrix u = random_unitary(rng, dim);
    const double s = unitary_power_l1(u);
    const double cap = static_cast<double>(dim) - 1.0;
    const double margin = s - cap;
    acc.record(margin, margin > c.tolerance,
               json{{"trial", t}, {"u", matrix_to_json(u)}, {"s", s}, {"cap", cap}});
  }
  return acc.finish(c.tolerance);
}

}  // namespace

CaseReport run_property(const PropertyCase& c) {
  if (!(c.tolerance > 0.0) || c.trials == 0) {
    throw ValidationError("property case needs positive tolerance and trials");
  }
  switch (c.id) {
    case PropertyId::EQ3_L1_TENSOR: return run_eq3(c);
    case PropertyId::EQ4_RENT_TENSOR: return run_eq4(c);
    case PropertyId::P2_PRODUCT_BOUND: return run_p2_product(c);
    case PropertyId::P2_TENSOR_EQUALITY: return run_p2_tensor(c);
    case PropertyId::CONTINUITY: return run_continuity(c);
    case PropertyId::P3_COMPOSE_BOUND: return run_p3_compose(c);
    case PropertyId::P4_TENSOR_L1: return run_tensor_law(c, CoherenceMeasure::L1);
    case PropertyId::P5_TENSOR_RENT:
      return run_tensor_law(c, CoherenceMeasure::RelativeEntropy);
    case PropertyId::P6_QUBIT_EQUALITY: return run_p6(c);
    case PropertyId::P7_COUNTEREXAMPLE: return run_p7(c);
    case PropertyId::P8_RATIO_EQUALITY: return run_p8(c);
    case PropertyId::HADAMARD_MAXIMALITY: return run_hadamard_max(c);
  }
  throw ValidationError("unknown property id");
}

VerifyReport run_selected(std::uint64_t seed, VerifyProfile profile,
                          const std::vector<PropertyId>& ids) {
  VerifyReport report;
  report.seed = seed;
  report.profile = profile;
  report.passed = true;
  for (PropertyId id : ids) {
    PropertyCase c;
    c.id = id;
    c.trials = default_trials(id, profile);
    c.tolerance = default_tolerance(id);
    c.seed = SplitMix64::stream(seed, static_cast<std::uint64_t>(id)).next();
    report.cases.push_back(run_property(c));
    if (!report.cases.back().passed) report.passed = false;
  }
  return report;
}

VerifyReport run_all(std::uint64_t seed, VerifyProfile profile) {
  return run_selected(seed, profile,
                      std::vector<PropertyId>(std::begin(kAllProperties),
                                              std::end(kAllProperties)));
}

std::string format_report(const VerifyReport& report) {
  std::ostringstream out;
  out << "profile: " << (report.profile == VerifyProfile::Quick ? "quick" : "full")
      << "  seed: " << report.seed << "\n";
  for (const CaseReport& c : report.cases) {
    out << "  " << property_name(c.id);
    for (std::size_t pad = std::string(property_name(c.id)).size(); pad < 22; ++pad)
      out << ' ';
    out << " trials=" << c.trials << " failures=" << c.failures
        << " worst_margin=" << format_double(c.worst_margin)
        << (c.passed ? "  pass" : "  FAIL");
    if (!c.detail.empty()) out << "  [" << c.detail << "]";
    out << "\n";
  }
  out << "overall: " << (report.passed ? "pass" : "FAIL") << "\n";
  return out.str();
}

}  // namespace qcp
