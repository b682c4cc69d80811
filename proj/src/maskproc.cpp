#include "cta/maskproc.hpp"

#include <algorithm>

namespace cta::maskproc {

GrayReduction reduce_grayscale(const PixelBuffer& buffer) {
  GrayReduction out{GrayImage(buffer.width, buffer.height), 0};
  for (std::size_t i = 0; i < buffer.pixel_count(); ++i) {
    const auto* p = &buffer.data[i * 4];
    out.image.data[i] = p[0];
    if (p[1] != p[0] || p[2] != p[0]) ++out.divergent_pixels;
  }
  return out;
}

BinaryMask binarize_mask(const PixelBuffer& buffer) {
  BinaryMask out(buffer.width, buffer.height);
  for (std::size_t i = 0; i < buffer.pixel_count(); ++i) out.set(i, buffer.data[i * 4] != 0);
  return out;
}

ValidationReport validate_pair(const GrayImage& image, const BinaryMask& mask, int expected) {
  ValidationReport r;
  r.image_dims_ok = image.width == expected && image.height == expected;
  r.mask_dims_ok = mask.width == expected && mask.height == expected;
  r.dims_match = image.width == mask.width && image.height == mask.height;
  if (!r.image_dims_ok)
    r.violations.push_back("image is " + std::to_string(image.width) + "x" + std::to_string(image.height) +
                           ", expected " + std::to_string(expected) + "x" + std::to_string(expected));
  if (!r.mask_dims_ok)
    r.violations.push_back("mask is " + std::to_string(mask.width) + "x" + std::to_string(mask.height) +
                           ", expected " + std::to_string(expected) + "x" + std::to_string(expected));
  if (!r.dims_match && r.image_dims_ok && r.mask_dims_ok) r.violations.push_back("image and mask sizes differ");

  BoundingBox box{mask.width, mask.height, -1, -1};
  for (int y = 0; y < mask.height; ++y)
    for (int x = 0; x < mask.width; ++x)
      if (mask.test(x, y)) {
        ++r.masked_pixels;
        box.x0 = std::min(box.x0, x);
        box.y0 = std::min(box.y0, y);
        box.x1 = std::max(box.x1, x);
        box.y1 = std::max(box.y1, y);
      }
  r.mask_nonempty = r.masked_pixels > 0;
  r.mask_full = r.mask_nonempty && r.masked_pixels == mask.size();
  r.coverage = mask.size() == 0 ? 0.0 : double(r.masked_pixels) / double(mask.size());
  if (r.mask_nonempty) r.masked_bbox = box;

  if (!r.mask_nonempty) r.violations.push_back("mask is empty");
  if (r.mask_full) r.violations.push_back("mask covers every pixel; no context left");
  return r;
}

}  // namespace cta::maskproc
