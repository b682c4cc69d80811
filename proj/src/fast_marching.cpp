#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <queue>
#include <vector>

#include "cta/error.hpp"
#include "cta/inpaint.hpp"

namespace cta::inpaint {

namespace {

enum class Flag : std::uint8_t { known, band, inside };

constexpr double kFar = 1e6;

struct Marcher {
  int w, h;
  std::vector<Flag> flag;
  std::vector<double> t;
  std::vector<double> value;

  bool in(int x, int y) const { return x >= 0 && y >= 0 && x < w && y < h; }
  std::size_t at(int x, int y) const { return std::size_t(y * w + x); }
  bool reached(int x, int y) const { return in(x, y) && flag[at(x, y)] != Flag::inside; }

  // First-order upwind solution of |grad T| = 1 from two orthogonal neighbours.
  double solve(int x1, int y1, int x2, int y2) const {
    const bool r1 = reached(x1, y1), r2 = reached(x2, y2);
    if (r1 && r2) {
      const double t1 = t[at(x1, y1)], t2 = t[at(x2, y2)];
      const double d = 2.0 - (t1 - t2) * (t1 - t2);
      if (d > 0) {
        const double r = std::sqrt(d);
        double s = (t1 + t2 - r) / 2;
        if (s >= t1 && s >= t2) return s;
        s += r;
        if (s >= t1 && s >= t2) return s;
      }
      return std::min(t1, t2) + 1;
    }
    if (r1) return 1 + t[at(x1, y1)];
    if (r2) return 1 + t[at(x2, y2)];
    return kFar;
  }

  double arrival(int x, int y) const {
    return std::min({solve(x - 1, y, x, y - 1), solve(x + 1, y, x, y - 1), solve(x - 1, y, x, y + 1),
                     solve(x + 1, y, x, y + 1)});
  }

  double grad_component(int x, int y, int dx, int dy) const {
    const bool fwd = reached(x + dx, y + dy), back = reached(x - dx, y - dy);
    const double c = t[at(x, y)];
    if (fwd && back) return (t[at(x + dx, y + dy)] - t[at(x - dx, y - dy)]) / 2;
    if (fwd) return t[at(x + dx, y + dy)] - c;
    if (back) return c - t[at(x - dx, y - dy)];
    return 0;
  }

  // Image gradient at a reached pixel from reached neighbours.
  double value_slope(int x, int y, int dx, int dy) const {
    const bool fwd = reached(x + dx, y + dy), back = reached(x - dx, y - dy);
    const double c = value[at(x, y)];
    if (fwd && back) return (value[at(x + dx, y + dy)] - value[at(x - dx, y - dy)]) / 2;
    if (fwd) return value[at(x + dx, y + dy)] - c;
    if (back) return c - value[at(x - dx, y - dy)];
    return 0;
  }

  // Telea estimate: weighted first-order extrapolations from reached pixels
  // within the radius. Weights combine direction (alignment with the
  // level-set normal), geometric distance and level-set distance. The result
  // is clamped to the range of the contributing values.
  double fill(int x, int y, double radius) const {
    const double gx = grad_component(x, y, 1, 0);
    const double gy = grad_component(x, y, 0, 1);
    const double tp = t[at(x, y)];
    const int r = int(std::ceil(radius));
    double sum_w = 0, sum = 0;
    double lo = 255, hi = 0;
    for (int qy = y - r; qy <= y + r; ++qy)
      for (int qx = x - r; qx <= x + r; ++qx) {
        if (!reached(qx, qy) || (qx == x && qy == y)) continue;
        const double rx = x - qx, ry = y - qy;
        const double len2 = rx * rx + ry * ry;
        if (len2 > radius * radius) continue;
        const double len = std::sqrt(len2);
        double dir = std::abs(rx * gx + ry * gy) / len;
        if (dir <= 0.01) dir = 1e-6;
        const double dst = 1.0 / len2;
        const double lev = 1.0 / (1.0 + std::abs(t[at(qx, qy)] - tp));
        const double wgt = dir * dst * lev;
        const double v = value[at(qx, qy)];
        const double extrapolated = v + value_slope(qx, qy, 1, 0) * rx + value_slope(qx, qy, 0, 1) * ry;
        sum_w += wgt;
        sum += wgt * extrapolated;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
    return sum_w > 0 ? std::clamp(sum / sum_w, lo, hi) : value[at(x, y)];
  }
};

}  // namespace

InpaintResult inpaint_fast_marching(const GrayImage& image, const BinaryMask& hole, const FastMarchingConfig& cfg) {
  const auto started = std::chrono::steady_clock::now();
  if (hole.width != image.width || hole.height != image.height)
    throw Error(Errc::size_mismatch, "image and mask sizes differ");
  if (!(cfg.radius_eps >= 1)) throw Error(Errc::bad_config, "radius_eps must be >= 1");

  InpaintResult result;
  result.image = image;
  const auto holes = hole.count();
  if (holes == 0) return result;
  if (holes == image.size()) throw Error(Errc::full_mask, "no known pixels to march from");

  const int w = image.width, h = image.height;
  Marcher m{w, h, std::vector<Flag>(image.size(), Flag::known), std::vector<double>(image.size(), 0.0),
            std::vector<double>(image.data.begin(), image.data.end())};
  for (std::size_t i = 0; i < image.size(); ++i)
    if (hole.test(i)) {
      m.flag[i] = Flag::inside;
      m.t[i] = kFar;
      m.value[i] = 0;
    }

  using Entry = std::pair<double, std::size_t>;  // (T, row-major index); ties pop in index order
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
  constexpr std::array<std::array<int, 2>, 4> kN4{{{0, -1}, {-1, 0}, {1, 0}, {0, 1}}};
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      if (m.flag[m.at(x, y)] != Flag::known) continue;
      for (const auto& [dx, dy] : kN4)
        if (m.in(x + dx, y + dy) && m.flag[m.at(x + dx, y + dy)] == Flag::inside) {
          m.flag[m.at(x, y)] = Flag::band;
          heap.push({0.0, m.at(x, y)});
          break;
        }
    }

  int filled = 0;
  while (!heap.empty()) {
    const auto [tp, i] = heap.top();
    heap.pop();
    if (m.flag[i] == Flag::known || tp > m.t[i]) continue;
    m.flag[i] = Flag::known;
    const int x = int(i % std::size_t(w)), y = int(i / std::size_t(w));
    for (const auto& [dx, dy] : kN4) {
      const int nx = x + dx, ny = y + dy;
      if (!m.in(nx, ny)) continue;
      const auto j = m.at(nx, ny);
      if (m.flag[j] == Flag::known) continue;
      const double tn = m.arrival(nx, ny);
      if (m.flag[j] == Flag::inside) {
        m.t[j] = tn;
        m.value[j] = m.fill(nx, ny, cfg.radius_eps);
        m.flag[j] = Flag::band;
        ++filled;
        heap.push({tn, j});
      } else if (tn < m.t[j]) {
        m.t[j] = tn;
        heap.push({tn, j});
      }
    }
  }

  for (std::size_t i = 0; i < image.size(); ++i)
    if (hole.test(i)) result.image.data[i] = std::uint8_t(std::clamp(std::round(m.value[i]), 0.0, 255.0));
  result.iterations = filled;
  result.engine_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
  return result;
}

}  // namespace cta::inpaint
