#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <string>

#include "cta/image.hpp"
#include "cta/nrrd.hpp"

namespace cta::raster {

/// Soft-tissue CT defaults used when a request does not specify window/level.
inline constexpr double kDefaultWindow = 400.0;
inline constexpr double kDefaultLevel = 40.0;

/// Linear CT-value to gray mapping:
/// g = clamp(round(255 * (v - (level - window / 2)) / window), 0, 255).
GrayImage window_level(const nrrd::SliceImage& slice, double window, double level);

/// Inverse of window_level for one gray value (no rounding).
double gray_to_value(std::uint8_t gray, double window, double level) noexcept;

/// Area-weighted mean of the R channel over each target pixel's footprint.
/// Requires R == G == B for every source pixel.
GrayImage downsample_area(const PixelBuffer& src, int target_w, int target_h);

/// A target pixel is masked when at least half of its footprint is covered
/// by source pixels whose R channel is non-zero.
BinaryMask downsample_mask(const PixelBuffer& src, int target_w, int target_h);

/// Nearest-neighbour upscaling for display; output is opaque gray RGBA.
PixelBuffer upsample_nearest(const GrayImage& src, double scale);

/// R = G = B = value, A = 255.
PixelBuffer to_rgba(const GrayImage& src);
PixelBuffer to_rgba(const BinaryMask& src);

/// Maps between display pixels (scaled, as drawn on screen) and native
/// pixels of a 100x100 region of interest.
struct DisplayMapping {
  double scale = 1.0;
  double roi_native_x = 0;
  double roi_native_y = 0;
  double roi_display_x = 0;
  double roi_display_y = 0;

  double display_extent() const noexcept { return kRoiSize * scale; }

  /// ROI-local native index of a display coordinate along x / y.
  long native_x_of(double display_x) const noexcept { return long(std::floor((display_x - roi_display_x) / scale)); }
  long native_y_of(double display_y) const noexcept { return long(std::floor((display_y - roi_display_y) / scale)); }

  /// Display coordinate of the top-left corner of ROI-local native pixel.
  double display_x_of(long native_x) const noexcept { return roi_display_x + double(native_x) * scale; }
  double display_y_of(long native_y) const noexcept { return roi_display_y + double(native_y) * scale; }

  /// Absolute native (volume) coordinates.
  double absolute_native_x_of(double display_x) const noexcept { return roi_native_x + double(native_x_of(display_x)); }
  double absolute_native_y_of(double display_y) const noexcept { return roi_native_y + double(native_y_of(display_y)); }
};

}  // namespace cta::raster
