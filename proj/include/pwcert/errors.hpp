#pragma once

#include <stdexcept>
#include <string>

namespace pwcert {

/// Malformed or out-of-range input: invalid domain, parameter outside its
/// admissible range, unparsable configuration.
class InvalidInput : public std::invalid_argument {
 public:
  explicit InvalidInput(const std::string& what) : std::invalid_argument(what) {}
};

/// The material lies outside the refractive-index regime an operation is
/// defined for (for example a result that requires n > 1).
class RegimeError : public std::domain_error {
 public:
  explicit RegimeError(const std::string& what) : std::domain_error(what) {}
};

/// A quadrature method was requested that cannot evaluate the given integral.
class MethodError : public std::logic_error {
 public:
  explicit MethodError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace pwcert
