#pragma once

#include <stdexcept>
#include <string>

namespace cta {

enum class Errc {
  magic_mismatch,
  unsupported_field,
  truncated_data,
  malformed_header,
  index_out_of_range,
  patch_out_of_bounds,
  size_mismatch,
  non_positive_window,
  upscale_requested,
  non_gray_input,
  malformed_png,
  bad_thresholds,
  bad_config,
  empty_mask,
  full_mask,
  non_convergence,
  engine_timeout,
  engine_failed,
  bad_output,
  validation_failed,
  io_error,
};

const char* to_string(Errc code) noexcept;

/// True for failures caused by the caller's input (bad files, shapes, masks,
/// indices) as opposed to engine or environment failures.
bool is_input_error(Errc code) noexcept;

/// Library-wide exception. `code()` identifies the failure class; `what()`
/// carries a human-readable message prefixed with the code name.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace cta
