#pragma once

#include <stdexcept>
#include <string>

namespace lensremap {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid input data: bad configuration, malformed file, mismatched sizes.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A numerical failure while evaluating a map (degenerate rotation,
/// degenerate rational coefficients, fixed-point division by zero).
class EvaluationError : public Error {
 public:
  using Error::Error;
};

/// EvaluationError raised while building a map, tagged with the output pixel.
class PixelError : public EvaluationError {
 public:
  PixelError(int u, int v, const std::string& what)
      : EvaluationError("pixel (" + std::to_string(u) + ", " + std::to_string(v) + "): " + what),
        u_(u),
        v_(v) {}

  int u() const noexcept { return u_; }
  int v() const noexcept { return v_; }

 private:
  int u_;
  int v_;
};

}  // namespace lensremap
