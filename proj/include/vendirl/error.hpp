#pragma once

#include <stdexcept>
#include <string>

namespace vendirl {

enum class ErrorCode {
  invalid_input,
  symmetry_violation,
  normalization,
  not_positive_definite,
  psd_violation,
  empty_input,
  insufficient_samples,
  degenerate_mean,
  bad_parameter,
  index_out_of_range,
  episode_over,
  unfilled_memory,
  numerical_failure,
  shape_mismatch,
  config_error,
  io_error,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace vendirl
