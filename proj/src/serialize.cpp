#include "qcp/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <utility>
#include <vector>

namespace qcp {

using nlohmann::json;

namespace {

double number_from_json(const json& j, const char* what) {
  if (!j.is_number()) throw ParseError(std::string(what) + " must be a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ParseError(std::string(what) + " must be finite");
  return v;
}

Complex scalar_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2) {
    throw ParseError("complex scalar must be a two-element array [re, im]");
  }
  return Complex(number_from_json(j[0], "real part"), number_from_json(j[1], "imaginary part"));
}

json scalar_to_json(const Complex& z) { return json::array({z.real(), z.imag()}); }

std::size_t index_from_json(const json& j, const char* what) {
  if (j.is_number_unsigned()) return j.get<std::size_t>();
  if (j.is_number_integer() && j.get<long long>() >= 0) {
    return static_cast<std::size_t>(j.get<long long>());
  }
  throw ParseError(std::string(what) + " must be a nonnegative integer");
}

}  // namespace

json matrix_to_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(scalar_to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

ComplexMatrix matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw ParseError("matrix must be a nonempty array of rows");
  const std::size_t rows = j.size();
  if (!j[0].is_array() || j[0].empty()) throw ParseError("matrix rows must be nonempty arrays");
  const std::size_t cols = j[0].size();
  ComplexMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    if (!j[i].is_array() || j[i].size() != cols) {
      throw ParseError("matrix rows must all have the same length");
    }
    for (std::size_t c = 0; c < cols; ++c) m(i, c) = scalar_from_json(j[i][c]);
  }
  return m;
}

QuantumOperation channel_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("channel document must be an object");
  if (!j.contains("type") || !j["type"].is_string()) {
    throw ParseError("channel document needs a string \"type\"");
  }
  const std::string type = j["type"].get<std::string>();

  if (type == "unitary") {
    if (!j.contains("matrix")) throw ParseError("unitary channel needs \"matrix\"");
    return QuantumOperation::unitary_unchecked(matrix_from_json(j["matrix"]));
  }
  if (type == "kraus") {
    if (!j.contains("ops") || !j["ops"].is_array() || j["ops"].empty()) {
      throw ParseError("kraus channel needs a nonempty \"ops\" array");
    }
    std::vector<ComplexMatrix> ops;
    for (const json& o : j["ops"]) ops.push_back(matrix_from_json(o));
    return QuantumOperation::kraus_unchecked(std::move(ops));
  }
  if (type == "append") {
    if (!j.contains("sigma")) throw ParseError("append channel needs \"sigma\"");
    const std::size_t in_dim =
        j.contains("in_dim") ? index_from_json(j["in_dim"], "in_dim") : 2;
    return QuantumOperation::append_unchecked(DensityMatrix(matrix_from_json(j["sigma"])),
                                              in_dim);
  }
  if (type == "dismiss") {
    if (!j.contains("dims") || !j["dims"].is_array() || j["dims"].empty()) {
      throw ParseError("dismiss channel needs a nonempty \"dims\" array");
    }
    if (!j.contains("traced") || !j["traced"].is_array()) {
      throw ParseError("dismiss channel needs a \"traced\" array");
    }
    SubsystemShape shape;
    for (const json& d : j["dims"]) shape.dims.push_back(index_from_json(d, "dimension"));
    std::vector<std::size_t> traced;
    for (const json& t : j["traced"]) traced.push_back(index_from_json(t, "traced index"));
    return QuantumOperation::dismiss_unchecked(std::move(shape), std::move(traced));
  }
  if (type == "compose" || type == "tensor") {
    const char* key = type == "compose" ? "steps" : "factors";
    if (!j.contains(key) || !j[key].is_array() || j[key].empty()) {
      throw ParseError(type + " channel needs a nonempty \"" + key + "\" array");
    }
    std::vector<QuantumOperation> parts;
    for (const json& p : j[key]) parts.push_back(channel_from_json(p));
    return type == "compose" ? QuantumOperation::compose_unchecked(std::move(parts))
                             : QuantumOperation::tensor_unchecked(std::move(parts));
  }
  throw ParseError("unknown channel type \"" + type + "\"");
}

json channel_to_json(const QuantumOperation& op) {
  struct Visitor {
    json operator()(const UnitaryOp& o) const {
      return json{{"type", "unitary"}, {"matrix", matrix_to_json(o.u)}};
    }
    json operator()(const KrausOp& o) const {
      json ops = json::array();
      for (const ComplexMatrix& k : o.ops) ops.push_back(matrix_to_json(k));
      return json{{"type", "kraus"}, {"ops", std::move(ops)}};
    }
    json operator()(const AppendOp& o) const {
      return json{{"type", "append"},
                  {"sigma", matrix_to_json(o.sigma.mat())},
                  {"in_dim", o.in_dim}};
    }
    json operator()(const DismissOp& o) const {
      return json{
          {"type", "dismiss"}, {"dims", o.shape.dims}, {"traced", o.traced}};
    }
    json operator()(const ComposeOp& o) const {
      json steps = json::array();
      for (const QuantumOperation& s : o.steps) steps.push_back(channel_to_json(s));
      return json{{"type", "compose"}, {"steps", std::move(steps)}};
    }
    json operator()(const TensorOp& o) const {
      json factors = json::array();
      for (const QuantumOperation& f : o.factors) factors.push_back(channel_to_json(f));
      return json{{"type", "tensor"}, {"factors", std::move(factors)}};
    }
  };
  return std::visit(Visitor{}, op.variant());
}

namespace {

GateKind gate_kind_from_string(const std::string& g) {
  if (g == "H") return GateKind::H;
  if (g == "K") return GateKind::K;
  if (g == "Kinv") return GateKind::Kinv;
  if (g == "CNOT") return GateKind::CNOT;
  if (g == "CCNOT") return GateKind::Toffoli;
  throw ParseError("unknown gate \"" + g + "\"");
}

const char* gate_kind_to_string(GateKind g) {
  switch (g) {
    case GateKind::H:
      return "H";
    case GateKind::K:
      return "K";
    case GateKind::Kinv:
      return "Kinv";
    case GateKind::CNOT:
      return "CNOT";
    case GateKind::Toffoli:
      return "CCNOT";
  }
  return "?";
}

}  // namespace

CircuitSpec circuit_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("circuit document must be an object");
  if (!j.contains("qubits")) throw ParseError("circuit document needs \"qubits\"");
  if (!j.contains("gates") || !j["gates"].is_array()) {
    throw ParseError("circuit document needs a \"gates\" array");
  }
  CircuitSpec spec;
  spec.qubits = index_from_json(j["qubits"], "qubits");
  for (const json& g : j["gates"]) {
    if (!g.is_object() || !g.contains("g") || !g["g"].is_string() || !g.contains("on") ||
        !g["on"].is_array()) {
      throw ParseError("each gate needs a string \"g\" and an index array \"on\"");
    }
    CircuitGate gate;
    gate.gate = gate_kind_from_string(g["g"].get<std::string>());
    for (const json& q : g["on"]) gate.on.push_back(index_from_json(q, "gate index"));
    spec.gates.push_back(std::move(gate));
  }
  return spec;
}

json circuit_to_json(const CircuitSpec& circuit) {
  json gates = json::array();
  for (const CircuitGate& gate : circuit.gates) {
    gates.push_back(json{{"g", gate_kind_to_string(gate.gate)}, {"on", gate.on}});
  }
  return json{{"qubits", circuit.qubits}, {"gates", std::move(gates)}};
}

json power_report_to_json(const PowerReport& report) {
  json out{
      {"measure", measure_name(report.measure)},
      {"s_value", report.s_value},
      {"argmax_basis_index", report.argmax_basis_index},
      {"method", method_name(report.method)},
  };
  if (report.s_hat_value.has_value()) {
    out["s_hat_value"] = *report.s_hat_value;
    out["s_hat_is_lower_bound"] = report.diagnostics.lower_bound_only;
    out["diagnostics"] = json{{"restarts", report.diagnostics.restarts},
                              {"total_iterations", report.diagnostics.total_iterations},
                              {"aborted_restarts", report.diagnostics.aborted_restarts},
                              {"converged", report.diagnostics.converged}};
  }
  if (report.s_hat_witness.has_value()) {
    out["s_hat_witness"] = matrix_to_json(report.s_hat_witness->mat());
  }
  return out;
}

json dilation_to_json(const DilationResult& dilation) {
  json psi = json::array();
  for (const Complex& a : dilation.ancilla_state) psi.push_back(scalar_to_json(a));
  return json{{"ancilla_dim", dilation.ancilla_dim},
              {"ancilla_state", std::move(psi)},
              {"big_unitary", matrix_to_json(dilation.big_unitary)},
              {"reconstruction_error", dilation.reconstruction_error}};
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace qcp
