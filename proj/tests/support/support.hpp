#pragma once

// Shared helpers for the unit, integration and acceptance suites.

#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "cta/image.hpp"
#include "cta/io.hpp"

#ifndef CTA_FIXTURE_DIR
#error "CTA_FIXTURE_DIR must point at tests/fixtures"
#endif

namespace cta::test {

inline std::filesystem::path fixture(std::string_view relative) {
  return std::filesystem::path(CTA_FIXTURE_DIR) / relative;
}

class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("cta_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(std::string_view name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

/// Writes a POSIX shell script and returns the argv prefix that runs it.
inline std::vector<std::string> shell_engine(const TempDir& dir, std::string_view name, std::string_view body) {
  const auto script = dir / name;
  io::write_file(script, "#!/bin/sh\n" + std::string(body) + "\n");
  return {"/bin/sh", script.string()};
}

/// External engine that copies the input image to the output path.
inline std::vector<std::string> identity_engine(const TempDir& dir) {
  return shell_engine(dir, "identity.sh", "cp \"$1\" \"$3\"");
}

inline std::vector<std::string> sleeping_identity_engine(const TempDir& dir, double seconds) {
  return shell_engine(dir, "sleepy.sh", "sleep " + std::to_string(seconds) + "\ncp \"$1\" \"$3\"");
}

inline std::vector<std::string> failing_engine(const TempDir& dir) {
  return shell_engine(dir, "fail.sh", "echo boom >&2\nexit 3");
}

inline std::vector<std::string> hanging_engine(const TempDir& dir) {
  return shell_engine(dir, "hang.sh", "sleep 30");
}

/// Files in `dir` whose names start with "<uid>_".
inline std::size_t count_uid_files(const std::filesystem::path& dir, std::string_view uid) {
  const std::string prefix = std::string(uid) + "_";
  std::size_t n = 0;
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    if (entry.path().filename().string().starts_with(prefix)) ++n;
  return n;
}

inline GrayImage random_image(std::mt19937& rng, int w, int h) {
  std::uniform_int_distribution<int> v(0, 255);
  GrayImage img(w, h);
  for (auto& p : img.data) p = std::uint8_t(v(rng));
  return img;
}

inline BinaryMask rect_mask(int w, int h, int x0, int y0, int mw, int mh) {
  BinaryMask m(w, h);
  for (int y = y0; y < y0 + mh; ++y)
    for (int x = x0; x < x0 + mw; ++x) m.set(x, y);
  return m;
}

inline BinaryMask disc_mask(int w, int h, double cx, double cy, double r) {
  BinaryMask m(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      if ((x - cx) * (x - cx) + (y - cy) * (y - cy) <= r * r) m.set(x, y);
  return m;
}

/// Random hole: a union of a few rectangles, never empty, never full.
inline BinaryMask random_mask(std::mt19937& rng, int w, int h) {
  std::uniform_int_distribution<int> count(1, 4), side(1, std::max(1, w / 3));
  BinaryMask m(w, h);
  const int rects = count(rng);
  for (int r = 0; r < rects; ++r) {
    const int mw = side(rng), mh = side(rng);
    const int x0 = std::uniform_int_distribution<int>(0, w - mw)(rng);
    const int y0 = std::uniform_int_distribution<int>(0, h - mh)(rng);
    for (int y = y0; y < y0 + mh; ++y)
      for (int x = x0; x < x0 + mw; ++x) m.set(x, y);
  }
  if (m.full()) m.set(0, 0, false);
  return m;
}

/// Number of 8-connected components of set pixels (flood fill).
inline int count_components(const BinaryMask& m) {
  std::vector<bool> seen(m.size(), false);
  int components = 0;
  for (int y = 0; y < m.height; ++y)
    for (int x = 0; x < m.width; ++x) {
      if (!m.test(x, y) || seen[m.index(x, y)]) continue;
      ++components;
      std::deque<std::pair<int, int>> q{{x, y}};
      seen[m.index(x, y)] = true;
      while (!q.empty()) {
        const auto [px, py] = q.front();
        q.pop_front();
        for (int dy = -1; dy <= 1; ++dy)
          for (int dx = -1; dx <= 1; ++dx) {
            const int nx = px + dx, ny = py + dy;
            if (!m.contains(nx, ny) || !m.test(nx, ny) || seen[m.index(nx, ny)]) continue;
            seen[m.index(nx, ny)] = true;
            q.push_back({nx, ny});
          }
      }
    }
  return components;
}

inline BinaryMask mask_union(const BinaryMask& a, const BinaryMask& b) {
  BinaryMask out(a.width, a.height);
  for (std::size_t i = 0; i < a.size(); ++i) out.set(i, a.test(i) || b.test(i));
  return out;
}

}  // namespace cta::test
