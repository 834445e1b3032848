#pragma once

#include <stdexcept>
#include <string>

namespace treeshift {

enum class ErrorCode {
  invalid_letter,
  signature_mismatch,
  monoid_has_no_inverses,
  resource_limit,
  construction_error,
  depth_too_small,
  empty_set,
  resolution_too_coarse,
  defect_too_large,
  search_budget_exhausted,
  resolution_depth_mismatch,
  duplicate_points,
  radius_too_small,
  not_cict,
  not_ibt_star,
  not_ibt_circ,
  seam_conflict,
  oracle_unavailable,
  render_cap_exceeded,
  parse_error,
  usage,
};

const char* error_code_name(ErrorCode code) noexcept;

/// The single exception type thrown by the library. The code is stable and
/// is what the CLI reports in its `error` field.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace treeshift
