#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include "qcp/channels.hpp"
#include "qcp/coherence.hpp"
#include "qcp/optimize.hpp"
#include "qcp/power.hpp"
#include "qcp/serialize.hpp"
#include "qcp/verify.hpp"

namespace {

using nlohmann::json;

// Exit codes: 0 success, 1 parse error, 2 validation error, 3 internal
// numerical failure (including failed verification properties).
constexpr int kOk = 0;
constexpr int kParseExit = 1;
constexpr int kValidationExit = 2;
constexpr int kNumericalExit = 3;

json load_document(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw qcp::ParseError("cannot read input file: " + path);
  json doc = json::parse(in, nullptr, false);
  if (doc.is_discarded()) throw qcp::ParseError("malformed JSON document: " + path);
  return doc;
}

qcp::QuantumOperation load_channel(const std::string& path) {
  const qcp::QuantumOperation op = qcp::channel_from_json(load_document(path));
  const qcp::ValidationReport report = qcp::validate(op);
  if (!report.passed) {
    std::string msg = "invalid channel:";
    for (const std::string& f : report.failures) msg += "\n  " + f;
    throw qcp::ValidationError(msg);
  }
  return op;
}

qcp::CoherenceMeasure parse_measure(const std::string& name) {
  if (name == "l1") return qcp::CoherenceMeasure::L1;
  if (name == "relent") return qcp::CoherenceMeasure::RelativeEntropy;
  throw qcp::ParseError("unknown measure \"" + name + "\" (expected l1 or relent)");
}

void print_matrix_text(const qcp::ComplexMatrix& m) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    std::string line = "  [";
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j > 0) line += ", ";
      line += "[" + qcp::format_double(m(i, j).real()) + ", " +
              qcp::format_double(m(i, j).imag()) + "]";
    }
    line += "]";
    std::cout << line << "\n";
  }
}

void print_power_report(const qcp::PowerReport& report, const std::string& output) {
  if (output == "json") {
    std::cout << qcp::power_report_to_json(report).dump(2) << "\n";
    return;
  }
  std::cout << "measure: " << qcp::measure_name(report.measure) << "\n"
            << "s_value: " << qcp::format_double(report.s_value) << "\n"
            << "argmax_basis_index: " << report.argmax_basis_index << "\n"
            << "method: " << qcp::method_name(report.method) << "\n";
  if (report.s_hat_value.has_value()) {
    std::cout << "s_hat_value: " << qcp::format_double(*report.s_hat_value)
              << (report.diagnostics.lower_bound_only ? "  (certified lower bound)" : "")
              << "\n"
              << "restarts: " << report.diagnostics.restarts << "\n"
              << "total_iterations: " << report.diagnostics.total_iterations << "\n"
              << "aborted_restarts: " << report.diagnostics.aborted_restarts << "\n"
              << "converged: " << (report.diagnostics.converged ? "yes" : "no") << "\n";
    if (report.s_hat_witness.has_value()) {
      std::cout << "s_hat_witness:\n";
      print_matrix_text(report.s_hat_witness->mat());
    }
  }
}

json verify_report_to_json(const qcp::VerifyReport& report) {
  json cases = json::array();
  for (const qcp::CaseReport& c : report.cases) {
    json entry{{"id", qcp::property_name(c.id)},
               {"trials", c.trials},
               {"failures", c.failures},
               {"worst_margin", c.worst_margin},
               {"passed", c.passed}};
    if (!c.detail.empty()) entry["detail"] = c.detail;
    if (!c.worst_witness.empty()) entry["worst_witness"] = json::parse(c.worst_witness);
    cases.push_back(std::move(entry));
  }
  return json{{"seed", report.seed},
              {"profile", report.profile == qcp::VerifyProfile::Quick ? "quick" : "full"},
              {"cases", std::move(cases)},
              {"passed", report.passed}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"coherence measures and cohering power of quantum channels"};
  app.require_subcommand(1);

  std::string input;
  std::string measure = "l1";
  std::string output = "text";
  std::string profile = "quick";
  std::string case_id;
  std::size_t restarts = 32;
  std::uint64_t seed = 0;
  double tol = 1e-9;
  std::size_t check_states = 20;

  CLI::App* power = app.add_subcommand("power", "cohering power of a channel document");
  power->add_option("input", input, "channel document (JSON)")->required();
  power->add_option("--measure", measure, "l1 | relent");
  power->add_option("--output", output, "text | json");

  CLI::App* gpower =
      app.add_subcommand("gpower", "generalized cohering power (optimized lower bound)");
  gpower->add_option("input", input, "channel document (JSON)")->required();
  gpower->add_option("--measure", measure, "l1 | relent");
  gpower->add_option("--output", output, "text | json");
  gpower->add_option("--restarts", restarts, "optimizer restarts");
  gpower->add_option("--seed", seed, "optimizer seed");
  gpower->add_option("--tol", tol, "optimizer objective tolerance");

  CLI::App* dilate = app.add_subcommand("dilate", "unitary dilation of a channel");
  dilate->add_option("input", input, "channel document (JSON)")->required();
  dilate->add_option("--check-states", check_states, "random states for the reconstruction check");
  dilate->add_option("--output", output, "text | json");

  CLI::App* verify = app.add_subcommand("verify", "run the property registry");
  verify->add_option("--profile", profile, "quick | full");
  verify->add_option("--seed", seed, "ensemble seed");
  verify->add_option("--case", case_id, "run a single property by id");
  verify->add_option("--output", output, "text | json");

  CLI::App* circuit = app.add_subcommand("circuit-bound", "Hadamard-count power bound");
  circuit->add_option("input", input, "circuit document (JSON)")->required();
  circuit->add_option("--output", output, "text | json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kParseExit;
  }

  try {
    if (output != "text" && output != "json") {
      throw qcp::ParseError("unknown output format \"" + output + "\"");
    }

    if (power->parsed()) {
      const qcp::PowerReport report =
          qcp::cohering_power(load_channel(input), parse_measure(measure));
      print_power_report(report, output);
      return kOk;
    }

    if (gpower->parsed()) {
      qcp::OptimizerConfig cfg;
      cfg.restarts = restarts;
      cfg.seed = seed;
      cfg.objective_tolerance = tol;
      const qcp::PowerReport report = qcp::generalized_cohering_power(
          load_channel(input), parse_measure(measure), cfg);
      print_power_report(report, output);
      return kOk;
    }

    if (dilate->parsed()) {
      const qcp::DilationResult result =
          qcp::stinespring_dilate(load_channel(input), check_states);
      if (output == "json") {
        std::cout << qcp::dilation_to_json(result).dump(2) << "\n";
      } else {
        std::cout << "ancilla_dim: " << result.ancilla_dim << "\n";
        std::cout << "reconstruction_error: "
                  << qcp::format_double(result.reconstruction_error) << "\n";
        std::cout << "ancilla_state:\n  [";
        for (std::size_t i = 0; i < result.ancilla_state.size(); ++i) {
          if (i > 0) std::cout << ", ";
          std::cout << "[" << qcp::format_double(result.ancilla_state[i].real()) << ", "
                    << qcp::format_double(result.ancilla_state[i].imag()) << "]";
        }
        std::cout << "]\n";
        std::cout << "big_unitary:\n";
        print_matrix_text(result.big_unitary);
      }
      return kOk;
    }

    if (verify->parsed()) {
      const qcp::VerifyProfile prof = [&] {
        if (profile == "quick") return qcp::VerifyProfile::Quick;
        if (profile == "full") return qcp::VerifyProfile::Full;
        throw qcp::ParseError("unknown profile \"" + profile + "\"");
      }();
      qcp::VerifyReport report;
      if (case_id.empty()) {
        report = qcp::run_all(seed, prof);
      } else {
        const auto id = qcp::parse_property_id(case_id);
        if (!id.has_value()) throw qcp::ParseError("unknown property id \"" + case_id + "\"");
        report = qcp::run_selected(seed, prof, {*id});
      }
      if (output == "json") {
        std::cout << verify_report_to_json(report).dump(2) << "\n";
      } else {
        std::cout << qcp::format_report(report);
      }
      return report.passed ? kOk : kNumericalExit;
    }

    if (circuit->parsed()) {
      const qcp::CircuitSpec spec = qcp::circuit_from_json(load_document(input));
      const qcp::CircuitBound bound = qcp::circuit_hadamard_bound(spec);
      if (output == "json") {
        json out{{"hadamard_count", bound.hadamard_count}, {"bound", bound.bound}};
        if (bound.exact.has_value()) out["exact"] = *bound.exact;
        std::cout << out.dump(2) << "\n";
      } else {
        std::cout << "hadamard_count: " << bound.hadamard_count << "\n"
                  << "bound: " << qcp::format_double(bound.bound) << "\n";
        if (bound.exact.has_value()) {
          std::cout << "exact: " << qcp::format_double(*bound.exact) << "\n";
        } else {
          std::cout << "exact: skipped (more than 6 qubits)\n";
        }
      }
      return kOk;
    }
  } catch (const qcp::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kParseExit;
  } catch (const qcp::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kValidationExit;
  } catch (const qcp::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kNumericalExit;
  } catch (const json::exception& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kParseExit;
  }
  return kOk;
}
