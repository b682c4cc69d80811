#include "cta/raster.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "cta/error.hpp"

namespace cta::raster {

namespace {

struct Tap {
  int src;
  std::int64_t weight;
};

// Exact area overlap along one axis. Source pixel s spans [s*dst, (s+1)*dst)
// and target pixel t spans [t*src, (t+1)*src) in units of 1/dst source
// pixels, so all overlaps are integers and each target's taps sum to `src`.
std::vector<std::vector<Tap>> axis_taps(int src, int dst) {
  std::vector<std::vector<Tap>> taps(static_cast<std::size_t>(dst));
  for (int t = 0; t < dst; ++t) {
    const std::int64_t lo = std::int64_t(t) * src;
    const std::int64_t hi = lo + src;
    for (std::int64_t s = lo / dst; s * dst < hi; ++s) {
      const auto overlap = std::min(hi, (s + 1) * dst) - std::max(lo, s * dst);
      if (overlap > 0) taps[std::size_t(t)].push_back({int(s), overlap});
    }
  }
  return taps;
}

void check_downscale(const PixelBuffer& src, int target_w, int target_h) {
  if (target_w < 1 || target_h < 1)
    throw Error(Errc::size_mismatch, "target dimensions must be positive");
  if (target_w > src.width || target_h > src.height)
    throw Error(Errc::upscale_requested, std::to_string(src.width) + "x" + std::to_string(src.height) + " -> " +
                                             std::to_string(target_w) + "x" + std::to_string(target_h));
}

}  // namespace

GrayImage window_level(const nrrd::SliceImage& slice, double window, double level) {
  if (!(window > 0)) throw Error(Errc::non_positive_window, "window must be > 0");
  GrayImage out(slice.width, slice.height);
  const double lo = level - window / 2;
  for (std::size_t i = 0; i < slice.values.size(); ++i) {
    const double g = std::round(255.0 * (slice.values[i] - lo) / window);
    out.data[i] = std::uint8_t(std::clamp(std::isnan(g) ? 0.0 : g, 0.0, 255.0));
  }
  return out;
}

double gray_to_value(std::uint8_t gray, double window, double level) noexcept {
  return level - window / 2 + double(gray) * window / 255.0;
}

GrayImage downsample_area(const PixelBuffer& src, int target_w, int target_h) {
  check_downscale(src, target_w, target_h);
  for (std::size_t o = 0; o < src.data.size(); o += 4)
    if (src.data[o] != src.data[o + 1] || src.data[o] != src.data[o + 2])
      throw Error(Errc::non_gray_input, "pixel " + std::to_string(o / 4) + " has differing color channels");

  const auto tx = axis_taps(src.width, target_w);
  const auto ty = axis_taps(src.height, target_h);
  const std::int64_t area = std::int64_t(src.width) * src.height;

  GrayImage out(target_w, target_h);
  for (int y = 0; y < target_h; ++y)
    for (int x = 0; x < target_w; ++x) {
      std::int64_t sum = 0;
      for (const auto& [sy, wy] : ty[std::size_t(y)])
        for (const auto& [sx, wx] : tx[std::size_t(x)]) sum += wx * wy * src.data[src.offset(sx, sy)];
      out.at(x, y) = std::uint8_t((2 * sum + area) / (2 * area));
    }
  return out;
}

BinaryMask downsample_mask(const PixelBuffer& src, int target_w, int target_h) {
  check_downscale(src, target_w, target_h);
  const auto tx = axis_taps(src.width, target_w);
  const auto ty = axis_taps(src.height, target_h);
  const std::int64_t area = std::int64_t(src.width) * src.height;

  BinaryMask out(target_w, target_h);
  for (int y = 0; y < target_h; ++y)
    for (int x = 0; x < target_w; ++x) {
      std::int64_t covered = 0;
      for (const auto& [sy, wy] : ty[std::size_t(y)])
        for (const auto& [sx, wx] : tx[std::size_t(x)])
          if (src.data[src.offset(sx, sy)] != 0) covered += wx * wy;
      out.set(x, y, 2 * covered >= area);
    }
  return out;
}

PixelBuffer upsample_nearest(const GrayImage& src, double scale) {
  if (!(scale > 0)) throw Error(Errc::bad_config, "scale must be > 0");
  const int w = int(std::lround(src.width * scale));
  const int h = int(std::lround(src.height * scale));
  if (w < 1 || h < 1) throw Error(Errc::bad_config, "scaled image would be empty");

  std::vector<int> col(static_cast<std::size_t>(w));
  for (int X = 0; X < w; ++X) col[std::size_t(X)] = std::min(int(std::floor(X / scale)), src.width - 1);

  PixelBuffer out(w, h);
  for (int Y = 0; Y < h; ++Y) {
    const int sy = std::min(int(std::floor(Y / scale)), src.height - 1);
    for (int X = 0; X < w; ++X) {
      const auto v = src.at(col[std::size_t(X)], sy);
      out.set_pixel(X, Y, {v, v, v, 255});
    }
  }
  return out;
}

namespace {

PixelBuffer expand(int w, int h, const std::vector<std::uint8_t>& values) {
  PixelBuffer out(w, h);
  for (std::size_t i = 0; i < values.size(); ++i) {
    std::fill_n(out.data.begin() + std::ptrdiff_t(i * 4), 3, values[i]);
    out.data[i * 4 + 3] = 255;
  }
  return out;
}

}  // namespace

PixelBuffer to_rgba(const GrayImage& src) { return expand(src.width, src.height, src.data); }
PixelBuffer to_rgba(const BinaryMask& src) { return expand(src.width, src.height, src.data); }

}  // namespace cta::raster
