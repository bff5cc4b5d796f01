#pragma once

#include <string>

#include <json.hpp>

#include "qcp/channels.hpp"
#include "qcp/power.hpp"

namespace qcp {

// Document conventions: complex scalars are two-element arrays [re, im],
// matrices are arrays of row arrays. Channel documents carry a "type" of
// unitary | kraus | append | dismiss | compose | tensor.

nlohmann::json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const nlohmann::json& j);  // throws ParseError

// Builds the operation without validating channel-level invariants, so a
// malformed channel can still be examined with validate(). Structural errors
// (bad trees, non-finite numbers) throw ParseError; an appended state that is
// not a density matrix throws ValidationError.
QuantumOperation channel_from_json(const nlohmann::json& j);
nlohmann::json channel_to_json(const QuantumOperation& op);

CircuitSpec circuit_from_json(const nlohmann::json& j);
nlohmann::json circuit_to_json(const CircuitSpec& circuit);

nlohmann::json power_report_to_json(const PowerReport& report);
nlohmann::json dilation_to_json(const DilationResult& dilation);

std::string format_double(double v);  // 17 significant digits

}  // namespace qcp
