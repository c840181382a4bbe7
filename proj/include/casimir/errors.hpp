#pragma once

#include <stdexcept>
#include <string>

namespace casimir {

/// Raised when an ideal material (perfect conductor, infinitely permeable)
/// is asked for a finite ε/μ response.
class IdealMaterialError : public std::domain_error {
 public:
  IdealMaterialError() : std::domain_error("ideal material has no finite axis response") {}
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Invalid construction parameters (negative thickness, gap <= 0, ...).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace casimir
