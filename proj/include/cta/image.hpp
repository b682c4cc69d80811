#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace cta {

/// Side length of the inpainting region of interest, in native voxels.
inline constexpr int kRoiSize = 100;

/// Number of entries in a flat RGBA array covering the region of interest.
inline constexpr std::size_t kRoiRgbaLength = std::size_t{kRoiSize} * kRoiSize * 4;

/// Single-channel 8-bit image, row-major.
struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> data;

  GrayImage() = default;
  GrayImage(int w, int h, std::uint8_t fill = 0)
      : width(w), height(h), data(std::size_t(w) * std::size_t(h), fill) {}

  std::size_t size() const noexcept { return data.size(); }
  std::size_t index(int x, int y) const noexcept { return std::size_t(y) * std::size_t(width) + std::size_t(x); }
  std::uint8_t at(int x, int y) const noexcept { return data[index(x, y)]; }
  std::uint8_t& at(int x, int y) noexcept { return data[index(x, y)]; }
  bool contains(int x, int y) const noexcept { return x >= 0 && y >= 0 && x < width && y < height; }

  friend bool operator==(const GrayImage&, const GrayImage&) = default;
};

/// Width x height RGBA bytes; rows are stored one after another and the four
/// channel values of a pixel are consecutive (R, G, B, A).
struct PixelBuffer {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> data;

  PixelBuffer() = default;
  PixelBuffer(int w, int h) : width(w), height(h), data(std::size_t(w) * std::size_t(h) * 4, 0) {}

  std::size_t pixel_count() const noexcept { return std::size_t(width) * std::size_t(height); }
  std::size_t offset(int x, int y) const noexcept { return (std::size_t(y) * std::size_t(width) + std::size_t(x)) * 4; }

  std::array<std::uint8_t, 4> pixel(int x, int y) const noexcept {
    const auto o = offset(x, y);
    return {data[o], data[o + 1], data[o + 2], data[o + 3]};
  }
  void set_pixel(int x, int y, std::array<std::uint8_t, 4> rgba) noexcept {
    std::copy(rgba.begin(), rgba.end(), data.begin() + std::ptrdiff_t(offset(x, y)));
  }

  friend bool operator==(const PixelBuffer&, const PixelBuffer&) = default;
};

/// Binary mask: 255 marks a hole pixel (to be synthesized), 0 marks context.
struct BinaryMask {
  static constexpr std::uint8_t kSet = 255;

  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> data;

  BinaryMask() = default;
  BinaryMask(int w, int h) : width(w), height(h), data(std::size_t(w) * std::size_t(h), 0) {}

  std::size_t size() const noexcept { return data.size(); }
  std::size_t index(int x, int y) const noexcept { return std::size_t(y) * std::size_t(width) + std::size_t(x); }
  bool test(int x, int y) const noexcept { return data[index(x, y)] != 0; }
  bool test(std::size_t i) const noexcept { return data[i] != 0; }
  void set(int x, int y, bool on = true) noexcept { data[index(x, y)] = on ? kSet : 0; }
  void set(std::size_t i, bool on = true) noexcept { data[i] = on ? kSet : 0; }
  bool contains(int x, int y) const noexcept { return x >= 0 && y >= 0 && x < width && y < height; }

  std::size_t count() const noexcept {
    return std::size_t(std::count_if(data.begin(), data.end(), [](std::uint8_t v) { return v != 0; }));
  }
  bool empty() const noexcept { return count() == 0; }
  bool full() const noexcept { return count() == size(); }

  friend bool operator==(const BinaryMask&, const BinaryMask&) = default;
};

}  // namespace cta
