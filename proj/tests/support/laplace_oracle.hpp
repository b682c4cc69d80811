#pragma once

#include <Eigen/Dense>
#include <vector>

#include "cta/image.hpp"

namespace cta::test {

/// Direct dense solve of the discrete Laplace equation on the masked pixels:
/// deg(p) u(p) - sum of in-image 4-neighbours = 0, known pixels fixed.
/// Returns the full field (known pixels copied from `image`).
inline std::vector<double> dense_laplace_solve(const GrayImage& image, const BinaryMask& hole) {
  const int w = image.width, h = image.height;
  std::vector<int> unknown(image.size(), -1);
  int n = 0;
  for (std::size_t i = 0; i < image.size(); ++i)
    if (hole.test(i)) unknown[i] = n++;

  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
  const int offsets[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const int row = unknown[image.index(x, y)];
      if (row < 0) continue;
      for (const auto& o : offsets) {
        const int nx = x + o[0], ny = y + o[1];
        if (!image.contains(nx, ny)) continue;
        a(row, row) += 1;
        const int col = unknown[image.index(nx, ny)];
        if (col >= 0) a(row, col) -= 1;
        else b(row) += image.at(nx, ny);
      }
    }
  const Eigen::VectorXd u = a.fullPivLu().solve(b);

  std::vector<double> field(image.data.begin(), image.data.end());
  for (std::size_t i = 0; i < image.size(); ++i)
    if (unknown[i] >= 0) field[i] = u(unknown[i]);
  return field;
}

}  // namespace cta::test
