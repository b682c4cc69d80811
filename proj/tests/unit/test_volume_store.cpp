#include <gtest/gtest.h>

#include <set>

#include "cta/volume_store.hpp"

namespace cta::gateway {
namespace {

struct FakeClock {
  VolumeStore::Clock::time_point now{};
  std::function<VolumeStore::Clock::time_point()> fn() {
    return [this] { return now; };
  }
};

nrrd::Volume tiny() { return nrrd::Volume({1, 1, 1}, nrrd::VoxelType::uint8); }

TEST(VolumeStore, IdsAreUniqueHex) {
  VolumeStore store(std::chrono::hours(1), 1000);
  std::set<std::string> ids;
  for (int i = 0; i < 200; ++i) {
    const auto id = store.insert(tiny());
    ASSERT_EQ(id.size(), 16u);
    ASSERT_EQ(id.find_first_not_of("0123456789abcdef"), std::string::npos);
    ids.insert(id);
  }
  EXPECT_EQ(ids.size(), 200u);
  EXPECT_EQ(store.find("nope"), nullptr);
}

TEST(VolumeStore, IdleEntriesExpire) {
  FakeClock clock;
  VolumeStore store(std::chrono::seconds(10), 8, clock.fn());
  const auto a = store.insert(tiny());
  const auto b = store.insert(tiny());
  clock.now += std::chrono::seconds(6);
  ASSERT_NE(store.find(a), nullptr);
  clock.now += std::chrono::seconds(6);
  EXPECT_NE(store.find(a), nullptr);
  EXPECT_EQ(store.find(b), nullptr);
  EXPECT_EQ(store.size(), 1u);
}

TEST(VolumeStore, CapacityEvictsLeastRecentlyUsed) {
  FakeClock clock;
  VolumeStore store(std::chrono::hours(1), 2, clock.fn());
  const auto a = store.insert(tiny());
  const auto b = store.insert(tiny());
  ASSERT_NE(store.find(a), nullptr);
  const auto c = store.insert(tiny());
  EXPECT_NE(store.find(a), nullptr);
  EXPECT_EQ(store.find(b), nullptr);
  EXPECT_NE(store.find(c), nullptr);
  EXPECT_EQ(store.size(), 2u);
}

TEST(VolumeStore, EvictedEntryStaysValidForHolders) {
  VolumeStore store(std::chrono::hours(1), 1);
  const auto a = store.insert(nrrd::Volume({2, 2, 2}, nrrd::VoxelType::int16));
  const auto held = store.find(a);
  store.insert(tiny());
  EXPECT_EQ(store.find(a), nullptr);
  ASSERT_NE(held, nullptr);
  EXPECT_EQ(held->volume.dims().count(), 8u);
  EXPECT_TRUE(store.erase(store.insert(tiny())));
  EXPECT_FALSE(store.erase(a));
}

}  // namespace
}  // namespace cta::gateway
