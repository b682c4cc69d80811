#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <deque>
#include <limits>

#include "cta/error.hpp"
#include "cta/inpaint.hpp"

namespace cta::inpaint {

namespace {

constexpr std::array<std::array<int, 2>, 4> kNeighbors4{{{0, -1}, {-1, 0}, {1, 0}, {0, 1}}};
constexpr std::array<std::array<int, 2>, 8> kNeighbors8{
    {{-1, -1}, {0, -1}, {1, -1}, {-1, 0}, {1, 0}, {-1, 1}, {0, 1}, {1, 1}}};

struct ChainHit {
  int distance = std::numeric_limits<int>::max();
  double value = 0;
  int group = -1;
};

// Values for hole pixels lying on completed edges: linear interpolation along
// the chain between the two nearest known edge pixels (by chain distance).
// Returns NaN for barrier pixels no known edge pixel can reach.
std::vector<double> chain_values(const GrayImage& image, const BinaryMask& hole, const BinaryMask& barrier,
                                 const edges::EdgeMap& edges) {
  const int w = image.width, h = image.height;
  const auto n = image.size();
  auto inside = [&](int x, int y) { return x >= 0 && y >= 0 && x < w && y < h; };

  std::vector<bool> anchor(n, false);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const auto i = std::size_t(y * w + x);
      if (hole.test(i) || !(edges.detected.test(i) || edges.completed.test(i))) continue;
      for (const auto& [ox, oy] : kNeighbors8)
        if (inside(x + ox, y + oy) && barrier.test(x + ox, y + oy)) anchor[i] = true;
    }

  std::vector<int> group(n, -1);
  int groups = 0;
  for (std::size_t s = 0; s < n; ++s) {
    if (!anchor[s] || group[s] >= 0) continue;
    std::deque<std::size_t> q{s};
    group[s] = groups;
    while (!q.empty()) {
      const auto i = q.front();
      q.pop_front();
      const int x = int(i % std::size_t(w)), y = int(i / std::size_t(w));
      for (const auto& [ox, oy] : kNeighbors8) {
        if (!inside(x + ox, y + oy)) continue;
        const auto j = std::size_t((y + oy) * w + x + ox);
        if (anchor[j] && group[j] < 0) {
          group[j] = groups;
          q.push_back(j);
        }
      }
    }
    ++groups;
  }

  std::vector<ChainHit> best1(n), best2(n);
  std::vector<int> dist(n);
  std::vector<double> carried(n);
  for (int g = 0; g < groups; ++g) {
    std::fill(dist.begin(), dist.end(), -1);
    std::deque<std::size_t> q;
    for (std::size_t a = 0; a < n; ++a) {
      if (group[a] != g) continue;
      const int x = int(a % std::size_t(w)), y = int(a / std::size_t(w));
      for (const auto& [ox, oy] : kNeighbors8) {
        if (!inside(x + ox, y + oy)) continue;
        const auto j = std::size_t((y + oy) * w + x + ox);
        if (barrier.test(j) && dist[j] < 0) {
          dist[j] = 1;
          carried[j] = image.data[a];
          q.push_back(j);
        }
      }
    }
    while (!q.empty()) {
      const auto i = q.front();
      q.pop_front();
      const int x = int(i % std::size_t(w)), y = int(i / std::size_t(w));
      for (const auto& [ox, oy] : kNeighbors8) {
        if (!inside(x + ox, y + oy)) continue;
        const auto j = std::size_t((y + oy) * w + x + ox);
        if (barrier.test(j) && dist[j] < 0) {
          dist[j] = dist[i] + 1;
          carried[j] = carried[i];
          q.push_back(j);
        }
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (dist[i] < 0) continue;
      const ChainHit hit{dist[i], carried[i], g};
      if (hit.distance < best1[i].distance) {
        best2[i] = best1[i];
        best1[i] = hit;
      } else if (hit.distance < best2[i].distance) {
        best2[i] = hit;
      }
    }
  }

  std::vector<double> values(n, std::numeric_limits<double>::quiet_NaN());
  for (std::size_t i = 0; i < n; ++i) {
    if (!barrier.test(i) || best1[i].group < 0) continue;
    if (best2[i].group < 0) {
      values[i] = best1[i].value;
    } else {
      const double d1 = best1[i].distance, d2 = best2[i].distance;
      values[i] = (best1[i].value * d2 + best2[i].value * d1) / (d1 + d2);
    }
  }
  return values;
}

}  // namespace

InpaintResult inpaint_diffusion(const GrayImage& image, const BinaryMask& hole, const DiffusionConfig& cfg) {
  return inpaint_diffusion(image, hole, edges::EdgeMap::empty(image.width, image.height), cfg);
}

InpaintResult inpaint_diffusion(const GrayImage& image, const BinaryMask& hole, const edges::EdgeMap& edges,
                                const DiffusionConfig& cfg) {
  const auto started = std::chrono::steady_clock::now();
  if (hole.width != image.width || hole.height != image.height)
    throw Error(Errc::size_mismatch, "image and mask sizes differ");
  if (edges.width != image.width || edges.height != image.height)
    throw Error(Errc::size_mismatch, "edge map and image sizes differ");
  if (!(cfg.tolerance > 0) || !(cfg.omega >= 1 && cfg.omega < 2) || cfg.max_iters < 1)
    throw Error(Errc::bad_config, "diffusion needs tolerance > 0, 1 <= omega < 2, max_iters >= 1");

  const int w = image.width, h = image.height;
  const auto n = image.size();
  InpaintResult result;
  result.image = image;
  result.field.assign(image.data.begin(), image.data.end());

  const auto holes = hole.count();
  if (holes == 0) return result;
  if (holes == n) throw Error(Errc::full_mask, "no known pixels to diffuse from");

  double known_sum = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (!hole.test(i)) known_sum += image.data[i];
  const double known_mean = known_sum / double(n - holes);

  BinaryMask barrier(w, h);
  for (std::size_t i = 0; i < n; ++i) barrier.set(i, hole.test(i) && edges.completed.test(i));
  if (barrier.count() > 0) {
    const auto values = chain_values(image, hole, barrier, edges);
    for (std::size_t i = 0; i < n; ++i) {
      if (!barrier.test(i)) continue;
      if (std::isnan(values[i])) barrier.set(i, false);  // unreachable chain piece: ordinary unknown
      else result.field[i] = values[i];
    }
  }

  auto inside = [&](int x, int y) { return x >= 0 && y >= 0 && x < w && y < h; };
  // Any edge pixel, known or not, severs the links pointing at it.
  auto is_edge = [&](std::size_t i) { return barrier.test(i) || (!hole.test(i) && edges.completed.test(i)); };

  // Hole components (4-connected, excluding barriers) and whether each one
  // reaches a known non-edge pixel.
  std::vector<int> component(n, -1);
  std::vector<bool> has_boundary;
  for (std::size_t s = 0; s < n; ++s) {
    if (!hole.test(s) || barrier.test(s) || component[s] >= 0) continue;
    const int c = int(has_boundary.size());
    bool boundary = false;
    std::deque<std::size_t> q{s};
    component[s] = c;
    while (!q.empty()) {
      const auto i = q.front();
      q.pop_front();
      const int x = int(i % std::size_t(w)), y = int(i / std::size_t(w));
      for (const auto& [ox, oy] : kNeighbors4) {
        if (!inside(x + ox, y + oy)) continue;
        const auto j = std::size_t((y + oy) * w + x + ox);
        if (!hole.test(j)) {
          if (!is_edge(j)) boundary = true;
        } else if (!barrier.test(j) && component[j] < 0) {
          component[j] = c;
          q.push_back(j);
        }
      }
    }
    has_boundary.push_back(boundary);
  }

  struct Unknown {
    std::size_t index;
    std::array<std::size_t, 4> links;
    int link_count;
  };
  std::vector<Unknown> unknowns;
  unknowns.reserve(holes);
  for (std::size_t i = 0; i < n; ++i) {
    if (component[i] < 0) continue;
    result.field[i] = known_mean;
    Unknown u{i, {}, 0};
    const bool open = has_boundary[std::size_t(component[i])];
    const int x = int(i % std::size_t(w)), y = int(i / std::size_t(w));
    for (const auto& [ox, oy] : kNeighbors4) {
      if (!inside(x + ox, y + oy)) continue;
      const auto j = std::size_t((y + oy) * w + x + ox);
      if (open && is_edge(j)) continue;
      u.links[std::size_t(u.link_count++)] = j;
    }
    if (u.link_count > 0) unknowns.push_back(u);
  }

  const double stop = cfg.tolerance * 255.0;
  const double omega = cfg.omega;
  auto& f = result.field;
  result.converged = false;
  int sweep = 0;
  while (sweep < cfg.max_iters) {
    ++sweep;
    double max_update = 0;
    for (const auto& u : unknowns) {
      double sum = 0;
      for (int k = 0; k < u.link_count; ++k) sum += f[u.links[std::size_t(k)]];
      const double update = omega * (sum / u.link_count - f[u.index]);
      f[u.index] += update;
      max_update = std::max(max_update, std::abs(update));
    }
    if (max_update < stop) {
      result.converged = true;
      break;
    }
  }
  result.iterations = sweep;
  if (!result.converged && cfg.fail_on_nonconvergence)
    throw Error(Errc::non_convergence, "no convergence after " + std::to_string(sweep) + " sweeps");

  for (std::size_t i = 0; i < n; ++i)
    if (hole.test(i)) result.image.data[i] = std::uint8_t(std::clamp(std::round(f[i]), 0.0, 255.0));
  result.engine_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
  return result;
}

}  // namespace cta::inpaint
