#include <gtest/gtest.h>

#include <random>

#include "cta/png.hpp"
#include "cta/service.hpp"
#include "httplib.h"
#include "json.hpp"
#include "support/requests.hpp"
#include "support/support.hpp"
#include "support/volumes.hpp"

namespace cta::gateway {
namespace {

using nlohmann::json;

class ServiceTest : public ::testing::Test {
 protected:
  test::TempDir scripts;
  test::TempDir work;
  std::unique_ptr<Service> service;
  int port = -1;

  void SetUp() override {
    GatewayConfig cfg;
    cfg.engine.external = {test::identity_engine(scripts), work.path(), 10};
    service = std::make_unique<Service>(cfg);
    port = service->start("127.0.0.1", 0);
    ASSERT_GT(port, 0);
  }

  httplib::Client client() {
    httplib::Client c("127.0.0.1", port);
    c.set_read_timeout(30);
    return c;
  }
};

TEST_F(ServiceTest, Health) {
  auto c = client();
  const auto r = c.Get("/health");
  ASSERT_TRUE(r);
  EXPECT_EQ(r->status, 200);
  EXPECT_EQ(json::parse(r->body)["status"], "ok");
}

TEST_F(ServiceTest, InpaintOverHttp) {
  std::mt19937 rng(70);
  const auto image = test::random_image(rng, 100, 100);
  const auto hole = test::rect_mask(100, 100, 20, 20, 30, 8);
  auto c = client();
  for (const char* engine : {"diffusion", "fmm", "external"}) {
    const auto r = c.Post(std::string("/inpaint?uid=http-1&engine=") + engine, test::inpaint_body(image, hole),
                          "application/json");
    ASSERT_TRUE(r);
    ASSERT_EQ(r->status, 200) << r->body;
    const auto out = test::result_buffer(r->body);
    ASSERT_EQ(out.data.size(), kRoiRgbaLength);
    for (std::size_t i = 0; i < image.size(); ++i)
      if (!hole.test(i)) {
        ASSERT_EQ(out.data[i * 4], image.data[i]) << engine;
      }
    const auto t = Timing::parse(r->get_header_value(kTimingHeader));
    ASSERT_TRUE(t.has_value());
    EXPECT_TRUE(t->monotone());
    EXPECT_EQ(r->get_header_value("X-Inpaint-Engine"), engine);
    EXPECT_EQ(test::count_uid_files(work.path(), "http-1"), 0u);
  }
}

TEST_F(ServiceTest, ValidationErrorOverHttp) {
  auto c = client();
  const auto r = c.Post("/inpaint?uid=http-2", "{\"image\":[1,2,3],\"mask\":[]}", "application/json");
  ASSERT_TRUE(r);
  EXPECT_EQ(r->status, 400);
  EXPECT_TRUE(json::parse(r->body).contains("error"));
  EXPECT_EQ(test::count_uid_files(work.path(), "http-2"), 0u);
}

TEST_F(ServiceTest, VolumeLifecycleOverHttp) {
  const auto ramp = test::ramp_volume(130, 120, 3, nrrd::VoxelType::int16);
  auto c = client();
  const auto up = c.Post("/volumes", nrrd::write_nrrd(ramp), "application/octet-stream");
  ASSERT_TRUE(up);
  ASSERT_EQ(up->status, 200);
  const std::string id = json::parse(up->body)["volume_id"];

  const auto slice = c.Get("/volumes/" + id + "/slices/1?window=400&level=40");
  ASSERT_TRUE(slice);
  ASSERT_EQ(slice->status, 200);
  EXPECT_EQ(slice->get_header_value("Content-Type"), "image/png");
  EXPECT_EQ(png::decode_gray(slice->body).width, 130);

  const auto patch =
      c.Post("/volumes/" + id + "/slices/1/patch", test::patch_body(30, 20, GrayImage(100, 100, 3)), "application/json");
  ASSERT_TRUE(patch);
  ASSERT_EQ(patch->status, 200) << patch->body;

  const auto down = c.Get("/volumes/" + id + "/download");
  ASSERT_TRUE(down);
  ASSERT_EQ(down->status, 200);
  EXPECT_EQ(test::count_differing_voxels(ramp, nrrd::parse_nrrd(down->body)), 10000u);

  EXPECT_EQ(c.Get("/volumes/0123456789abcdef/download")->status, 404);
  EXPECT_EQ(c.Get("/volumes/" + id + "/slices/3")->status, 400);
}

TEST(ServiceBind, ConflictingPortFails) {
  Service first(GatewayConfig{});
  const int port = first.start("127.0.0.1", 0);
  ASSERT_GT(port, 0);
  Service second(GatewayConfig{});
  EXPECT_EQ(second.bind("127.0.0.1", port), -1);
}

}  // namespace
}  // namespace cta::gateway
