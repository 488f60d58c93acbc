#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace clr {

using Complex = std::complex<double>;

// Structural checks (hermiticity, norms, trace) use this tolerance.
inline constexpr double kStructuralTol = 1e-12;
// Spectral checks (eigenvalue positivity, fidelity inputs) use this one.
inline constexpr double kSpectralTol = 1e-9;
// Dense-state operations refuse registers larger than this.
inline constexpr int kMaxDenseQubits = 12;

// Malformed textual input (graph files, CSV, JSON payloads).
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operands whose sizes cannot be combined.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace clr
