#pragma once

#include <stdexcept>
#include <string>

namespace qcp {

// A value violates a structural contract: non-unitary matrix where a unitary
// is required, invalid density matrix, dimension mismatch, singular input.
struct ValidationError : std::runtime_error {
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// An input document could not be parsed.
struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// An internal numerical routine failed its own post-condition.
struct NumericalError : std::runtime_error {
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace qcp
