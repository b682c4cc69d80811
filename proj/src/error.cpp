#include "cta/error.hpp"

namespace cta {

const char* to_string(Errc code) noexcept {
  switch (code) {
    case Errc::magic_mismatch: return "MagicMismatch";
    case Errc::unsupported_field: return "UnsupportedField";
    case Errc::truncated_data: return "TruncatedData";
    case Errc::malformed_header: return "MalformedHeader";
    case Errc::index_out_of_range: return "IndexOutOfRange";
    case Errc::patch_out_of_bounds: return "PatchOutOfBounds";
    case Errc::size_mismatch: return "SizeMismatch";
    case Errc::non_positive_window: return "NonPositiveWindow";
    case Errc::upscale_requested: return "UpscaleRequested";
    case Errc::non_gray_input: return "NonGrayInput";
    case Errc::malformed_png: return "MalformedPng";
    case Errc::bad_thresholds: return "BadThresholds";
    case Errc::bad_config: return "BadConfig";
    case Errc::empty_mask: return "EmptyMask";
    case Errc::full_mask: return "FullMask";
    case Errc::non_convergence: return "NonConvergence";
    case Errc::engine_timeout: return "EngineTimeout";
    case Errc::engine_failed: return "EngineFailed";
    case Errc::bad_output: return "BadOutput";
    case Errc::validation_failed: return "ValidationFailed";
    case Errc::io_error: return "IoError";
  }
  return "Unknown";
}

bool is_input_error(Errc code) noexcept {
  switch (code) {
    case Errc::magic_mismatch:
    case Errc::unsupported_field:
    case Errc::truncated_data:
    case Errc::malformed_header:
    case Errc::index_out_of_range:
    case Errc::patch_out_of_bounds:
    case Errc::size_mismatch:
    case Errc::non_positive_window:
    case Errc::upscale_requested:
    case Errc::non_gray_input:
    case Errc::malformed_png:
    case Errc::empty_mask:
    case Errc::full_mask:
    case Errc::validation_failed:
      return true;
    default:
      return false;
  }
}

}  // namespace cta
