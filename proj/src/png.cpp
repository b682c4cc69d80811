#include "cta/png.hpp"

#include <png.h>

#include <cstring>
#include <memory>

#include "cta/error.hpp"

namespace cta::png {

namespace {

struct ImageGuard {
  png_image* img;
  ~ImageGuard() { png_image_free(img); }
};

std::string write(const std::uint8_t* pixels, int w, int h, png_uint_32 format) {
  if (w < 1 || h < 1) throw Error(Errc::malformed_png, "cannot encode an empty image");
  png_image img{};
  img.version = PNG_IMAGE_VERSION;
  img.width = png_uint_32(w);
  img.height = png_uint_32(h);
  img.format = format;

  png_alloc_size_t size = 0;
  if (!png_image_write_get_memory_size(img, size, 0, pixels, 0, nullptr))
    throw Error(Errc::io_error, std::string("png encode failed: ") + img.message);
  std::string out(size, '\0');
  if (!png_image_write_to_memory(&img, out.data(), &size, 0, pixels, 0, nullptr))
    throw Error(Errc::io_error, std::string("png encode failed: ") + img.message);
  out.resize(size);
  return out;
}

}  // namespace

std::string encode(const GrayImage& image) { return write(image.data.data(), image.width, image.height, PNG_FORMAT_GRAY); }

std::string encode(const PixelBuffer& image) {
  return write(image.data.data(), image.width, image.height, PNG_FORMAT_RGBA);
}

std::string encode_rgb(const PixelBuffer& image) {
  std::vector<std::uint8_t> rgb(image.pixel_count() * 3);
  for (std::size_t i = 0; i < image.pixel_count(); ++i) std::memcpy(&rgb[i * 3], &image.data[i * 4], 3);
  return write(rgb.data(), image.width, image.height, PNG_FORMAT_RGB);
}

PixelBuffer decode(std::span<const std::uint8_t> bytes) {
  png_image img{};
  img.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&img, bytes.data(), bytes.size()))
    throw Error(Errc::malformed_png, img.message);
  ImageGuard guard{&img};

  img.format = PNG_FORMAT_RGBA;
  PixelBuffer out(int(img.width), int(img.height));
  if (out.data.size() != PNG_IMAGE_SIZE(img)) throw Error(Errc::malformed_png, "unexpected decoded size");
  if (!png_image_finish_read(&img, nullptr, out.data.data(), 0, nullptr))
    throw Error(Errc::malformed_png, img.message);
  return out;
}

PixelBuffer decode(std::string_view bytes) {
  return decode(std::span<const std::uint8_t>(reinterpret_cast<const std::uint8_t*>(bytes.data()), bytes.size()));
}

GrayImage decode_gray(std::string_view bytes) {
  const auto rgba = decode(bytes);
  GrayImage out(rgba.width, rgba.height);
  for (std::size_t i = 0; i < out.size(); ++i) out.data[i] = rgba.data[i * 4];
  return out;
}

}  // namespace cta::png
