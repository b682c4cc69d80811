#pragma once

#include "cta/image.hpp"

namespace cta::edges {

enum class ThresholdMode {
  /// low/high are fractions of the image's maximum gradient magnitude.
  relative,
  /// low/high are gradient magnitudes (Sobel on 0..255 data).
  absolute,
};

struct CannyParams {
  double sigma = 1.4;
  double low = 0.1;
  double high = 0.25;
  ThresholdMode mode = ThresholdMode::relative;
};

struct CompletionParams {
  double angle_tolerance_deg = 25.0;
  int max_extension = 30;
  /// Number of edge pixels behind a terminal used to estimate its direction.
  int direction_samples = 5;
};

/// Two-layer edge map. `detected` holds Canny edges of the known region;
/// `completed` holds synthesized edges. `excluded` is the hole grown by one
/// pixel (8-neighbourhood): no detected edge lies inside it and every
/// completed edge does.
struct EdgeMap {
  int width = 0;
  int height = 0;
  BinaryMask detected;
  BinaryMask completed;
  BinaryMask excluded;
  CannyParams params;

  static EdgeMap empty(int w, int h);
};

/// One-pixel 3x3 dilation.
BinaryMask dilate(const BinaryMask& mask);

/// Canny edge detection restricted to the known region: Gaussian blur
/// (radius ceil(3 sigma)) with replicated borders, Sobel gradients, 8-sector
/// non-maximum suppression, then double-threshold hysteresis. Candidates
/// inside the dilated hole are dropped before hysteresis.
EdgeMap canny(const GrayImage& image, const BinaryMask& hole, const CannyParams& params = {});

/// Bridges detected edges across the hole with straight segments. Edge
/// pixels touching the excluded zone are terminals; terminal pairs whose
/// directions face each other within the angular tolerance and whose
/// connecting segment stays inside the zone are joined nearest-first.
/// Unpaired terminals are extended along their direction.
EdgeMap complete_edges(EdgeMap map, const BinaryMask& hole, const CompletionParams& params = {});

/// Debug rendering: white background, detected edges black, completed mid-gray.
GrayImage render(const EdgeMap& map);

}  // namespace cta::edges
