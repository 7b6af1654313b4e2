#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace gabor {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Largest exponent magnitude accepted before exp() evaluation is refused.
inline constexpr double kExpGuard = 700.0;

/// Input failed a structural precondition (ordering, finiteness, schema).
class ValidationError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// A numerically meaningful computation could not be carried out safely.
class NumericError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// exp(z) with an overflow guard; `where` names module.operation for errors.
inline Complex guarded_exp(Complex z, const char* where) {
  if (z.real() > kExpGuard) {
    throw NumericError(std::string(where) + ": exponent real part " +
                       std::to_string(z.real()) + " exceeds overflow guard " +
                       std::to_string(kExpGuard));
  }
  return std::exp(z);
}

}  // namespace gabor
