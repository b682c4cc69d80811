#pragma once

#include <chrono>
#include <functional>
#include <list>
#include <memory>
#include <mutex>
#include <random>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <unordered_map>

#include "cta/nrrd.hpp"

namespace cta::gateway {

/// In-memory volume sessions with idle-time expiry and an LRU size cap.
///
/// Lookups hand out shared ownership of an entry; readers take `mutex`
/// shared, writers take it exclusively. An evicted entry stays valid for
/// holders that already looked it up.
class VolumeStore {
 public:
  using Clock = std::chrono::steady_clock;

  struct Entry {
    mutable std::shared_mutex mutex;
    nrrd::Volume volume;
  };

  VolumeStore(std::chrono::seconds ttl, std::size_t capacity, std::function<Clock::time_point()> now = Clock::now);

  /// Stores the volume and returns its new id (16 hex digits).
  std::string insert(nrrd::Volume volume);

  /// Entry for `id`, or nullptr when unknown or expired. Refreshes its age.
  std::shared_ptr<Entry> find(std::string_view id);

  bool erase(std::string_view id);
  std::size_t size() const;

 private:
  struct Slot {
    std::shared_ptr<Entry> entry;
    Clock::time_point last_access;
    std::list<std::string>::iterator lru;
  };

  void expire_locked(Clock::time_point now);
  std::string fresh_id_locked();

  std::chrono::seconds ttl_;
  std::size_t capacity_;
  std::function<Clock::time_point()> now_;

  mutable std::mutex mutex_;
  std::unordered_map<std::string, Slot> slots_;
  std::list<std::string> lru_;  // most recent first
  std::mt19937_64 rng_;
};

}  // namespace cta::gateway
