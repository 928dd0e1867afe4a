#pragma once

#include <stdexcept>

namespace bform {

// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidMatrix : Error { using Error::Error; };
struct ShapeMismatch : Error { using Error::Error; };
struct SingularMatrix : Error { using Error::Error; };
struct DegenerateForm : Error { using Error::Error; };
struct InvalidParameters : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };
struct EvalDomainError : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

}  // namespace bform
