#pragma once

#include <stdexcept>
#include <string>

namespace xbias {

// Raised when an input is well-formed but violates a domain precondition
// (wrong gate family, circuit not of the supported shape, p >= 1/2, ...).
class DomainError : public std::runtime_error {
 public:
  explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

// Raised when a dense backend is asked for more qubits than its cap.
class SizeError : public DomainError {
 public:
  explicit SizeError(const std::string& what) : DomainError(what) {}
};

}  // namespace xbias
