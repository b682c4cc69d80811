#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>

#include "cta/image.hpp"

namespace cta::png {

/// 8-bit grayscale PNG.
std::string encode(const GrayImage& image);
/// 8-bit RGBA PNG.
std::string encode(const PixelBuffer& image);
/// 8-bit RGB PNG (alpha dropped).
std::string encode_rgb(const PixelBuffer& image);

/// Decodes any PNG into 8-bit RGBA; gray inputs expand to R = G = B.
PixelBuffer decode(std::span<const std::uint8_t> bytes);
PixelBuffer decode(std::string_view bytes);
/// Decodes and keeps only the R channel.
GrayImage decode_gray(std::string_view bytes);

}  // namespace cta::png
