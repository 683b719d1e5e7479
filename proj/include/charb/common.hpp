#pragma once

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace charb {

using cd = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;

/// Invalid user input (CLI config, bad parameter ranges). Exit code 2.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Violated numerical contract (non-unitary input, closure failure,
/// probability out of range, non-convergent fit). Exit code 3.
struct NumericalError : std::runtime_error {
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace charb
