#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bilat {

enum class ErrorCode {
  duplicate_index,
  missing_index,
  index_out_of_range,
  scheme_mismatch,
  dimension_mismatch,
  non_finite,
  non_unit_normal,
  invalid_motion,
  degenerate_configuration,
  non_convergence,
  length_mismatch,
  negative_weight,
  zero_pair_distance,
  zero_variance,
  insufficient_replicates,
  invalid_argument,
  empty_input,
  not_registered,
  parse_error,
  unknown_spec,
  io_error,
};

/// Stable machine-readable name, e.g. "DuplicateIndex".
std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace bilat
