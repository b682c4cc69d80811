#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "cta/image.hpp"

namespace cta::maskproc {

struct GrayReduction {
  GrayImage image;
  /// Pixels whose G or B channel differed from R (R was kept).
  std::size_t divergent_pixels = 0;
};

/// Keeps the R channel of every pixel.
GrayReduction reduce_grayscale(const PixelBuffer& buffer);

/// 255 where R != 0, else 0. G, B and alpha are ignored.
BinaryMask binarize_mask(const PixelBuffer& buffer);

struct BoundingBox {
  int x0 = 0, y0 = 0;  // inclusive
  int x1 = 0, y1 = 0;  // inclusive
  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

struct ValidationReport {
  bool image_dims_ok = false;
  bool mask_dims_ok = false;
  bool dims_match = false;
  bool mask_nonempty = false;
  bool mask_full = false;
  std::size_t masked_pixels = 0;
  double coverage = 0.0;
  std::optional<BoundingBox> masked_bbox;
  std::vector<std::string> violations;

  bool ok() const noexcept { return violations.empty(); }
};

/// Checks an (image, mask) pair against the service contract: both
/// `expected` x `expected`, non-empty mask, at least one context pixel.
ValidationReport validate_pair(const GrayImage& image, const BinaryMask& mask, int expected = kRoiSize);

}  // namespace cta::maskproc
