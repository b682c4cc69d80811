#include "cta/edgemap.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <numbers>
#include <tuple>
#include <vector>

#include "cta/error.hpp"

namespace cta::edges {

namespace {

constexpr std::array<std::array<int, 2>, 8> kNeighbors8{
    {{-1, -1}, {0, -1}, {1, -1}, {-1, 0}, {1, 0}, {-1, 1}, {0, 1}, {1, 1}}};

struct Point {
  int x = 0;
  int y = 0;
};

struct Vec {
  double x = 0;
  double y = 0;
  double norm() const { return std::hypot(x, y); }
  Vec unit() const {
    const double n = norm();
    return n > 0 ? Vec{x / n, y / n} : Vec{};
  }
};

double dot(Vec a, Vec b) { return a.x * b.x + a.y * b.y; }

std::vector<double> gaussian_blur(const GrayImage& img, double sigma) {
  const int radius = int(std::ceil(3.0 * sigma));
  std::vector<double> kernel(static_cast<std::size_t>(2 * radius + 1));
  double total = 0;
  for (int i = -radius; i <= radius; ++i) {
    kernel[std::size_t(i + radius)] = std::exp(-(i * i) / (2.0 * sigma * sigma));
    total += kernel[std::size_t(i + radius)];
  }
  for (auto& k : kernel) k /= total;

  const int w = img.width, h = img.height;
  std::vector<double> tmp(img.size()), out(img.size());
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      double acc = 0;
      for (int i = -radius; i <= radius; ++i)
        acc += kernel[std::size_t(i + radius)] * img.at(std::clamp(x + i, 0, w - 1), y);
      tmp[std::size_t(y * w + x)] = acc;
    }
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      double acc = 0;
      for (int i = -radius; i <= radius; ++i)
        acc += kernel[std::size_t(i + radius)] * tmp[std::size_t(std::clamp(y + i, 0, h - 1) * w + x)];
      out[std::size_t(y * w + x)] = acc;
    }
  return out;
}

// Bresenham line, endpoints included; consecutive points are 8-adjacent.
std::vector<Point> raster_line(Point a, Point b) {
  std::vector<Point> pts;
  int dx = std::abs(b.x - a.x), sx = a.x < b.x ? 1 : -1;
  int dy = -std::abs(b.y - a.y), sy = a.y < b.y ? 1 : -1;
  int err = dx + dy;
  for (Point p = a;;) {
    pts.push_back(p);
    if (p.x == b.x && p.y == b.y) break;
    const int e2 = 2 * err;
    if (e2 >= dy) {
      err += dy;
      p.x += sx;
    }
    if (e2 <= dx) {
      err += dx;
      p.y += sy;
    }
  }
  return pts;
}

struct Terminal {
  Point at;
  Vec dir;
  std::size_t index = 0;  // row-major position, for tie-breaking
};

Vec estimate_direction(const BinaryMask& detected, const BinaryMask& zone, Point start, int samples) {
  const int w = detected.width;
  std::vector<int> depth(detected.size(), -1);
  std::deque<Point> queue{start};
  depth[detected.index(start.x, start.y)] = 0;
  int deepest = 0;
  std::vector<Point> tail;
  while (!queue.empty()) {
    const auto p = queue.front();
    queue.pop_front();
    const int d = depth[std::size_t(p.y * w + p.x)];
    if (d > deepest) {
      deepest = d;
      tail.clear();
    }
    if (d == deepest && d > 0) tail.push_back(p);
    if (d == samples) continue;
    for (const auto& [ox, oy] : kNeighbors8) {
      const Point q{p.x + ox, p.y + oy};
      if (!detected.contains(q.x, q.y) || !detected.test(q.x, q.y)) continue;
      auto& dq = depth[detected.index(q.x, q.y)];
      if (dq >= 0) continue;
      dq = d + 1;
      queue.push_back(q);
    }
  }
  if (!tail.empty()) {
    Vec centroid;
    for (const auto& p : tail) {
      centroid.x += p.x;
      centroid.y += p.y;
    }
    centroid.x /= double(tail.size());
    centroid.y /= double(tail.size());
    return Vec{start.x - centroid.x, start.y - centroid.y}.unit();
  }
  // Isolated pixel: point into the excluded zone.
  Vec into;
  for (const auto& [ox, oy] : kNeighbors8) {
    const int x = start.x + ox, y = start.y + oy;
    if (zone.contains(x, y) && zone.test(x, y)) {
      into.x += ox;
      into.y += oy;
    }
  }
  return into.unit();
}

std::vector<Point> zone_neighbors(const BinaryMask& zone, Point p) {
  std::vector<Point> out;
  for (const auto& [ox, oy] : kNeighbors8) {
    const Point q{p.x + ox, p.y + oy};
    if (zone.contains(q.x, q.y) && zone.test(q.x, q.y)) out.push_back(q);
  }
  return out;
}

// Zone pixel adjacent to `from` that best continues toward `target`.
Point entry_toward(const BinaryMask& zone, Point from, Vec heading) {
  const auto candidates = zone_neighbors(zone, from);
  Point best = candidates.front();
  double best_score = -2;
  for (const auto& q : candidates) {
    const double score = dot(Vec{double(q.x - from.x), double(q.y - from.y)}.unit(), heading);
    if (score > best_score + 1e-12) {
      best_score = score;
      best = q;
    }
  }
  return best;
}

std::vector<Terminal> find_terminals(const BinaryMask& detected, const BinaryMask& zone, int samples) {
  const int w = detected.width, h = detected.height;
  BinaryMask is_terminal(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      if (detected.test(x, y) && !zone_neighbors(zone, {x, y}).empty()) is_terminal.set(x, y);

  // One terminal per 8-connected cluster: the pixel touching the most zone
  // pixels, first in row-major order on ties.
  std::vector<Terminal> terminals;
  std::vector<bool> seen(is_terminal.size(), false);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      if (!is_terminal.test(x, y) || seen[is_terminal.index(x, y)]) continue;
      Point best{x, y};
      std::size_t best_count = 0;
      std::deque<Point> queue{{x, y}};
      seen[is_terminal.index(x, y)] = true;
      while (!queue.empty()) {
        const auto p = queue.front();
        queue.pop_front();
        const auto count = zone_neighbors(zone, p).size();
        const auto pi = is_terminal.index(p.x, p.y);
        if (count > best_count || (count == best_count && pi < is_terminal.index(best.x, best.y))) {
          best_count = count;
          best = p;
        }
        for (const auto& [ox, oy] : kNeighbors8) {
          const Point q{p.x + ox, p.y + oy};
          if (!is_terminal.contains(q.x, q.y) || !is_terminal.test(q.x, q.y)) continue;
          if (seen[is_terminal.index(q.x, q.y)]) continue;
          seen[is_terminal.index(q.x, q.y)] = true;
          queue.push_back(q);
        }
      }
      terminals.push_back({best, estimate_direction(detected, zone, best, samples), is_terminal.index(best.x, best.y)});
    }
  return terminals;
}

}  // namespace

EdgeMap EdgeMap::empty(int w, int h) {
  EdgeMap m;
  m.width = w;
  m.height = h;
  m.detected = BinaryMask(w, h);
  m.completed = BinaryMask(w, h);
  m.excluded = BinaryMask(w, h);
  return m;
}

BinaryMask dilate(const BinaryMask& mask) {
  BinaryMask out(mask.width, mask.height);
  for (int y = 0; y < mask.height; ++y)
    for (int x = 0; x < mask.width; ++x) {
      if (!mask.test(x, y)) continue;
      for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx)
          if (out.contains(x + dx, y + dy)) out.set(x + dx, y + dy);
    }
  return out;
}

EdgeMap canny(const GrayImage& image, const BinaryMask& hole, const CannyParams& params) {
  if (!(params.low > 0 && params.low < params.high))
    throw Error(Errc::bad_thresholds, "need 0 < low < high");
  if (!(params.sigma > 0)) throw Error(Errc::bad_config, "sigma must be > 0");
  if (hole.width != image.width || hole.height != image.height)
    throw Error(Errc::size_mismatch, "image and mask sizes differ");

  const int w = image.width, h = image.height;
  EdgeMap map = EdgeMap::empty(w, h);
  map.params = params;
  map.excluded = dilate(hole);
  if (w == 0 || h == 0) return map;

  const auto blurred = gaussian_blur(image, params.sigma);
  auto b = [&](int x, int y) { return blurred[std::size_t(std::clamp(y, 0, h - 1) * w + std::clamp(x, 0, w - 1))]; };

  std::vector<double> mag(image.size()), gx(image.size()), gy(image.size());
  double max_mag = 0;
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const auto i = std::size_t(y * w + x);
      gx[i] = (b(x + 1, y - 1) + 2 * b(x + 1, y) + b(x + 1, y + 1)) - (b(x - 1, y - 1) + 2 * b(x - 1, y) + b(x - 1, y + 1));
      gy[i] = (b(x - 1, y + 1) + 2 * b(x, y + 1) + b(x + 1, y + 1)) - (b(x - 1, y - 1) + 2 * b(x, y - 1) + b(x + 1, y - 1));
      mag[i] = std::hypot(gx[i], gy[i]);
      max_mag = std::max(max_mag, mag[i]);
    }
  if (max_mag <= 0) return map;

  const double scale = params.mode == ThresholdMode::relative ? max_mag : 1.0;
  const double low = params.low * scale, high = params.high * scale;

  // Sector directions modulo 180 degrees.
  constexpr std::array<std::array<int, 2>, 4> kAxis{{{1, 0}, {1, 1}, {0, 1}, {-1, 1}}};
  auto m_at = [&](int x, int y) { return (x < 0 || y < 0 || x >= w || y >= h) ? 0.0 : mag[std::size_t(y * w + x)]; };

  // 0 = none, 1 = weak, 2 = strong
  std::vector<std::uint8_t> cls(image.size(), 0);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const auto i = std::size_t(y * w + x);
      if (mag[i] < low || map.excluded.test(i)) continue;
      const double angle = std::atan2(gy[i], gx[i]);
      int sector = int(std::lround(angle / (std::numbers::pi / 4)));
      sector = ((sector % 4) + 4) % 4;
      const auto [dx, dy] = kAxis[std::size_t(sector)];
      if (mag[i] > m_at(x + dx, y + dy) && mag[i] >= m_at(x - dx, y - dy)) cls[i] = mag[i] >= high ? 2 : 1;
    }

  std::deque<Point> queue;
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      if (cls[std::size_t(y * w + x)] == 2) {
        map.detected.set(x, y);
        queue.push_back({x, y});
      }
  while (!queue.empty()) {
    const auto p = queue.front();
    queue.pop_front();
    for (const auto& [ox, oy] : kNeighbors8) {
      const int x = p.x + ox, y = p.y + oy;
      if (x < 0 || y < 0 || x >= w || y >= h) continue;
      const auto i = std::size_t(y * w + x);
      if (cls[i] == 1 && !map.detected.test(i)) {
        map.detected.set(i);
        queue.push_back({x, y});
      }
    }
  }
  return map;
}

EdgeMap complete_edges(EdgeMap map, const BinaryMask& hole, const CompletionParams& params) {
  if (hole.width != map.width || hole.height != map.height)
    throw Error(Errc::size_mismatch, "edge map and mask sizes differ");
  map.excluded = dilate(hole);
  map.completed = BinaryMask(map.width, map.height);
  const auto& zone = map.excluded;

  auto terminals = find_terminals(map.detected, zone, params.direction_samples);
  const double cos_tol = std::cos(params.angle_tolerance_deg * std::numbers::pi / 180.0);

  struct Candidate {
    double distance;
    std::size_t first_index, second_index;
    std::size_t a, b;
    std::vector<Point> path;
  };
  std::vector<Candidate> candidates;
  for (std::size_t i = 0; i < terminals.size(); ++i)
    for (std::size_t j = i + 1; j < terminals.size(); ++j) {
      const auto& ta = terminals[i];
      const auto& tb = terminals[j];
      const Vec ab{double(tb.at.x - ta.at.x), double(tb.at.y - ta.at.y)};
      const double d = ab.norm();
      if (d <= 0) continue;
      const Vec u = ab.unit();
      if (dot(ta.dir, u) < cos_tol || dot(tb.dir, Vec{-u.x, -u.y}) < cos_tol) continue;
      const auto sa = entry_toward(zone, ta.at, u);
      const auto sb = entry_toward(zone, tb.at, Vec{-u.x, -u.y});
      auto path = raster_line(sa, sb);
      if (!std::all_of(path.begin(), path.end(), [&](Point p) { return zone.test(p.x, p.y); })) continue;
      candidates.push_back({d, std::min(ta.index, tb.index), std::max(ta.index, tb.index), i, j, std::move(path)});
    }
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& l, const Candidate& r) {
    return std::tie(l.distance, l.first_index, l.second_index) < std::tie(r.distance, r.first_index, r.second_index);
  });

  std::vector<bool> paired(terminals.size(), false);
  for (const auto& c : candidates) {
    if (paired[c.a] || paired[c.b]) continue;
    paired[c.a] = paired[c.b] = true;
    for (const auto& p : c.path) map.completed.set(p.x, p.y);
  }

  for (std::size_t i = 0; i < terminals.size(); ++i) {
    if (paired[i]) continue;
    const auto& t = terminals[i];
    if (t.dir.norm() == 0) continue;
    const auto start = entry_toward(zone, t.at, t.dir);
    if (dot(Vec{double(start.x - t.at.x), double(start.y - t.at.y)}, t.dir) <= 0) continue;
    const Point end{int(std::lround(start.x + t.dir.x * (params.max_extension - 1))),
                    int(std::lround(start.y + t.dir.y * (params.max_extension - 1)))};
    for (const auto& p : raster_line(start, end)) {
      if (!zone.contains(p.x, p.y) || !zone.test(p.x, p.y)) break;
      map.completed.set(p.x, p.y);
    }
  }
  return map;
}

GrayImage render(const EdgeMap& map) {
  GrayImage out(map.width, map.height, 255);
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (map.completed.test(i)) out.data[i] = 128;
    if (map.detected.test(i)) out.data[i] = 0;
  }
  return out;
}

}  // namespace cta::edges
