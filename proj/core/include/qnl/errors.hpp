// Error taxonomy shared by all qnl components.
#pragma once

#include <stdexcept>
#include <string>

namespace qnl {

// Shape/metadata mismatch between fields, grids or series.
struct StructuralError : std::runtime_error {
  explicit StructuralError(const std::string& msg) : std::runtime_error(msg) {}
};

// A mathematical compatibility condition is violated (e.g. nonzero mean
// input to the inverse Laplacian). Carries the offending residual.
struct CompatibilityError : std::runtime_error {
  double residual;
  CompatibilityError(const std::string& msg, double r)
      : std::runtime_error(msg + " (residual " + std::to_string(r) + ")"), residual(r) {}
};

struct ParameterError : std::invalid_argument {
  explicit ParameterError(const std::string& msg) : std::invalid_argument(msg) {}
};

// Pointwise domain violation (e.g. nonpositive density). Carries the flat
// index of the first offending cell.
struct DomainError : std::runtime_error {
  std::size_t cell;
  DomainError(const std::string& msg, std::size_t c)
      : std::runtime_error(msg + " (cell " + std::to_string(c) + ")"), cell(c) {}
};

// Time step too large for the scheme. Carries the advised maximum.
struct StabilityError : std::runtime_error {
  double dt_max;
  StabilityError(const std::string& msg, double adv)
      : std::runtime_error(msg + " (advised dt_max " + std::to_string(adv) + ")"), dt_max(adv) {}
};

struct DivergenceError : std::runtime_error {
  explicit DivergenceError(const std::string& msg) : std::runtime_error(msg) {}
};

// Series sampling too coarse for a requested window. Carries the required dt.
struct SamplingError : std::runtime_error {
  double dt_required;
  SamplingError(const std::string& msg, double dt)
      : std::runtime_error(msg + " (required dt <= " + std::to_string(dt) + ")"), dt_required(dt) {}
};

// Simulated solution left the regime the scheme assumes (e.g. density floor).
struct RegimeError : std::runtime_error {
  explicit RegimeError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace qnl
