#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "cta/edgemap.hpp"
#include "cta/error.hpp"
#include "cta/png.hpp"
#include "support/support.hpp"

namespace cta::edges {
namespace {

GrayImage step_image(int w, int h, int column, std::uint8_t left = 0, std::uint8_t right = 255) {
  GrayImage img(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) img.at(x, y) = x < column ? left : right;
  return img;
}

/// Thin dark line on a bright background through (cx, cy) at `angle_deg`.
GrayImage line_image(int w, int h, double cx, double cy, double angle_deg) {
  const double t = angle_deg * M_PI / 180.0;
  GrayImage img(w, h, 200);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const double d = std::abs(-(x - cx) * std::sin(t) + (y - cy) * std::cos(t));
      if (d < 1.5) img.at(x, y) = 40;
    }
  return img;
}

void expect_layers_consistent(const EdgeMap& em, const BinaryMask& hole) {
  const auto zone = dilate(hole);
  EXPECT_EQ(em.excluded, zone);
  for (std::size_t i = 0; i < zone.size(); ++i) {
    ASSERT_FALSE(em.detected.test(i) && zone.test(i)) << "detected pixel " << i << " inside the excluded zone";
    ASSERT_FALSE(em.completed.test(i) && !zone.test(i)) << "completed pixel " << i << " outside the excluded zone";
    ASSERT_FALSE(em.completed.test(i) && em.detected.test(i));
  }
}

TEST(Dilate, GrowsByOnePixel) {
  BinaryMask m(5, 5);
  m.set(2, 2);
  const auto d = dilate(m);
  EXPECT_EQ(d.count(), 9u);
  EXPECT_TRUE(d.test(1, 1));
  EXPECT_FALSE(d.test(0, 2));
  BinaryMask corner(4, 4);
  corner.set(0, 0);
  EXPECT_EQ(dilate(corner).count(), 4u);
}

TEST(Canny, ConstantImageHasNoEdges) {
  for (std::uint8_t v : {0, 100, 255}) {
    const auto em = canny(GrayImage(100, 100, v), BinaryMask(100, 100));
    EXPECT_TRUE(em.detected.empty());
    EXPECT_TRUE(em.completed.empty());
  }
}

TEST(Canny, VerticalStepYieldsThinEdgeAtTheStep) {
  const auto em = canny(step_image(100, 100, 50), BinaryMask(100, 100));
  for (int y = 0; y < 100; ++y) {
    int count = 0;
    for (int x = 0; x < 100; ++x)
      if (em.detected.test(x, y)) {
        ++count;
        EXPECT_LE(std::abs(x - 50), 1) << "row " << y << " col " << x;
      }
    EXPECT_EQ(count, 1) << "row " << y;
  }
}

TEST(Canny, NoDetectedEdgesInsideTheMask) {
  const auto hole = test::rect_mask(100, 100, 40, 40, 20, 20);
  const auto em = canny(step_image(100, 100, 50), hole);
  expect_layers_consistent(em, hole);
  for (int y = 0; y < 100; ++y)
    for (int x = 0; x < 100; ++x) {
      if (hole.test(x, y)) {
        ASSERT_FALSE(em.detected.test(x, y));
      }
    }
  EXPECT_FALSE(em.detected.empty());
}

TEST(Canny, RejectsBadParameters) {
  const GrayImage img(10, 10);
  const BinaryMask hole(10, 10);
  for (auto [low, high] : {std::pair{0.3, 0.2}, std::pair{0.0, 0.2}, std::pair{0.2, 0.2}}) {
    try {
      canny(img, hole, {1.4, low, high, ThresholdMode::relative});
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::bad_thresholds);
    }
  }
  EXPECT_THROW(canny(img, hole, {0.0, 0.1, 0.2, ThresholdMode::relative}), Error);
  EXPECT_THROW(canny(img, BinaryMask(9, 10)), Error);
}

class CannyReference : public ::testing::TestWithParam<const char*> {};

TEST_P(CannyReference, AgreesWithIndependentImplementation) {
  const std::string name = GetParam();
  const auto img = png::decode_gray(io::read_file(test::fixture("canny/" + name + ".png")));
  const auto ref = png::decode_gray(io::read_file(test::fixture("canny/" + name + "_edges.png")));
  const auto em = canny(img, BinaryMask(img.width, img.height));
  std::size_t disagree = 0;
  for (std::size_t i = 0; i < img.size(); ++i) disagree += em.detected.test(i) != (ref.data[i] != 0);
  const double fraction = double(disagree) / double(img.size());
  RecordProperty("disagreement", std::to_string(fraction));
  EXPECT_LE(fraction, 0.02) << disagree << " differing pixels";
}

INSTANTIATE_TEST_SUITE_P(Fixtures, CannyReference,
                         ::testing::Values("vertical_step", "oblique_step", "disc", "nested_rectangles",
                                           "blob_and_square"));

TEST(Canny, Deterministic) {
  std::mt19937 rng(21);
  const auto img = test::random_image(rng, 100, 100);
  const auto hole = test::random_mask(rng, 100, 100);
  const auto a = complete_edges(canny(img, hole), hole);
  const auto b = complete_edges(canny(img, hole), hole);
  EXPECT_EQ(a.detected, b.detected);
  EXPECT_EQ(a.completed, b.completed);
}

TEST(Canny, EnlargingTheMaskNeverAddsEdges) {
  std::mt19937 rng(22);
  const auto img = png::decode_gray(io::read_file(test::fixture("canny/blob_and_square.png")));
  for (int trial = 0; trial < 20; ++trial) {
    const auto small = test::random_mask(rng, 100, 100);
    const auto large = test::mask_union(small, test::random_mask(rng, 100, 100));
    const auto a = canny(img, small);
    const auto b = canny(img, large);
    for (std::size_t i = 0; i < a.detected.size(); ++i) ASSERT_FALSE(b.detected.test(i) && !a.detected.test(i));
  }
}

TEST(CompleteEdges, FlatRegionMaskHasNoTerminals) {
  const auto img = step_image(100, 100, 80);
  const auto hole = test::rect_mask(100, 100, 20, 20, 15, 15);
  const auto em = complete_edges(canny(img, hole), hole);
  EXPECT_TRUE(em.completed.empty());
}

TEST(CompleteEdges, BridgesVerticalStepAcrossBand) {
  const auto hole = test::rect_mask(100, 100, 0, 40, 100, 12);
  const auto em = complete_edges(canny(step_image(100, 100, 50), hole), hole);
  expect_layers_consistent(em, hole);
  EXPECT_FALSE(em.completed.empty());
  for (int y = 0; y < 100; ++y)
    for (int x = 0; x < 100; ++x) {
      if (em.completed.test(x, y)) {
        EXPECT_LE(std::abs(x - 50), 1);
      }
    }
  EXPECT_EQ(test::count_components(test::mask_union(em.detected, em.completed)), 1);
}

TEST(CompleteEdges, BridgesObliqueLinesThroughDiscs) {
  for (double angle : {0.0, 20.0, 45.0, 70.0, 90.0, 135.0}) {
    const auto img = line_image(100, 100, 50, 50, angle);
    const auto hole = test::disc_mask(100, 100, 50, 50, 8);
    const auto em = complete_edges(canny(img, hole), hole);
    expect_layers_consistent(em, hole);
    const auto lines = test::count_components(em.detected);
    const auto joined = test::count_components(test::mask_union(em.detected, em.completed));
    EXPECT_EQ(lines, 4) << "angle " << angle;
    EXPECT_EQ(joined, 2) << "angle " << angle;
  }
}

TEST(CompleteEdges, UnpairedTerminalExtendsAtMostThirtyPixels) {
  // A vertical line that stops inside a large hole: its edges enter from the
  // top and have no partner below.
  GrayImage img = line_image(100, 100, 50, 50, 90);
  for (int y = 40; y < 100; ++y)
    for (int x = 0; x < 100; ++x) img.at(x, y) = 200;
  const auto hole = test::rect_mask(100, 100, 5, 30, 90, 65);
  const auto em = complete_edges(canny(img, hole), hole);
  expect_layers_consistent(em, hole);
  ASSERT_FALSE(em.completed.empty());
  int lowest = 0;
  for (int y = 0; y < 100; ++y)
    for (int x = 0; x < 100; ++x)
      if (em.completed.test(x, y)) {
        lowest = std::max(lowest, y);
        EXPECT_LE(std::abs(x - 50), 3);
      }
  // Completed pixels start at row 29, the first row of the excluded zone.
  EXPECT_LE(lowest - 29, 30);
  EXPECT_GE(lowest - 29, 20);
}

TEST(Render, Layers) {
  auto em = EdgeMap::empty(3, 1);
  em.detected.set(0, 0);
  em.completed.set(1, 0);
  const auto g = render(em);
  EXPECT_EQ(g.data, (std::vector<std::uint8_t>{0, 128, 255}));
}

}  // namespace
}  // namespace cta::edges
