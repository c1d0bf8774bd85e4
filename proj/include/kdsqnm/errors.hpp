#pragma once

#include <stdexcept>
#include <string>

namespace kdsqnm {

/// Base for runtime numerical failures (as opposed to caller contract violations,
/// which throw std::invalid_argument / std::domain_error).
struct NumericError : std::runtime_error {
  explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

/// An iterative solve (Newton, bracketing) failed to converge.
struct NonConvergence : NumericError {
  explicit NonConvergence(const std::string& msg) : NumericError(msg) {}
};

/// The principal square root was requested on its branch cut.
struct BranchCutError : std::domain_error {
  explicit BranchCutError(const std::string& msg) : std::domain_error(msg) {}
};

/// The quantization problem is degenerate (vanishing diagonal away from the
/// selected index, vanishing curvature, ...).
struct DegenerateProblem : NumericError {
  explicit DegenerateProblem(const std::string& msg) : NumericError(msg) {}
};

}  // namespace kdsqnm
