#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qcp/channels.hpp"
#include "qcp/power.hpp"

namespace qcp {

// Executable randomized properties. Inequality cases must see zero failures:
// a violation is an implementation bug, not a statistical event. The
// optimizer-equality cases enforce the proven direction strictly and the
// global-optimality direction within the case tolerance.
enum class PropertyId {
  EQ3_L1_TENSOR,
  EQ4_RENT_TENSOR,
  P2_PRODUCT_BOUND,
  P2_TENSOR_EQUALITY,
  CONTINUITY,
  P3_COMPOSE_BOUND,
  P4_TENSOR_L1,
  P5_TENSOR_RENT,
  P6_QUBIT_EQUALITY,
  P7_COUNTEREXAMPLE,
  P8_RATIO_EQUALITY,
  HADAMARD_MAXIMALITY,
};

inline constexpr PropertyId kAllProperties[] = {
    PropertyId::EQ3_L1_TENSOR,    PropertyId::EQ4_RENT_TENSOR,
    PropertyId::P2_PRODUCT_BOUND, PropertyId::P2_TENSOR_EQUALITY,
    PropertyId::CONTINUITY,       PropertyId::P3_COMPOSE_BOUND,
    PropertyId::P4_TENSOR_L1,     PropertyId::P5_TENSOR_RENT,
    PropertyId::P6_QUBIT_EQUALITY, PropertyId::P7_COUNTEREXAMPLE,
    PropertyId::P8_RATIO_EQUALITY, PropertyId::HADAMARD_MAXIMALITY,
};

struct PropertyCase {
  PropertyId id = PropertyId::EQ3_L1_TENSOR;
  std::size_t trials = 1;
  std::uint64_t seed = 0;
  double tolerance = 1e-9;
};

struct CaseReport {
  PropertyId id = PropertyId::EQ3_L1_TENSOR;
  std::size_t trials = 0;
  std::size_t failures = 0;       // strict violations
  double worst_margin = 0.0;      // signed; at most the tolerance when passing
  std::string worst_witness;      // JSON replay data for the worst trial
  std::string detail;
  bool passed = false;
};

enum class VerifyProfile { Quick, Full };

struct VerifyReport {
  std::uint64_t seed = 0;
  VerifyProfile profile = VerifyProfile::Quick;
  std::vector<CaseReport> cases;
  bool passed = false;
};

const char* property_name(PropertyId id);
std::optional<PropertyId> parse_property_id(const std::string& name);

double default_tolerance(PropertyId id);
std::size_t default_trials(PropertyId id, VerifyProfile profile);

CaseReport run_property(const PropertyCase& c);

VerifyReport run_all(std::uint64_t seed, VerifyProfile profile);
VerifyReport run_selected(std::uint64_t seed, VerifyProfile profile,
                          const std::vector<PropertyId>& ids);

std::string format_report(const VerifyReport& report);

// Bundled qubit instance (printed at four decimals, hence sanitized) where
// the relative-entropy coherence gain at a mixed state strictly exceeds the
// cohering power: the two quantities are genuinely different measures.
ComplexMatrix relent_gap_unitary();
DensityMatrix relent_gap_state();

// The same matrices before sanitization.
ComplexMatrix relent_gap_unitary_raw();
ComplexMatrix relent_gap_state_raw();

}  // namespace qcp
