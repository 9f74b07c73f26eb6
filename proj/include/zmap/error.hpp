#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace zmap {

enum class ErrorCode {
  degenerate_quad,
  degenerate_stencil,
  newton_divergence,
  positivity_violation,
  branch_point_evaluation,
  parity_violation,
  geometry_violation,
  ill_conditioned,
  residual_too_large,
  too_close_to_contour,
  extraction_degenerate,
  tail_not_resolved,
  shape_violation,
  singular_basis_change,
  invalid_argument,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Single exception type for the library; the code is what callers branch on.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace zmap
