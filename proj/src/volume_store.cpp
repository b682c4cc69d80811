#include "cta/volume_store.hpp"

#include <cstdio>

namespace cta::gateway {

VolumeStore::VolumeStore(std::chrono::seconds ttl, std::size_t capacity, std::function<Clock::time_point()> now)
    : ttl_(ttl), capacity_(capacity == 0 ? 1 : capacity), now_(std::move(now)), rng_(std::random_device{}()) {}

std::string VolumeStore::fresh_id_locked() {
  for (;;) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(rng_()));
    if (!slots_.contains(buf)) return buf;
  }
}

void VolumeStore::expire_locked(Clock::time_point now) {
  while (!lru_.empty()) {
    const auto& oldest = lru_.back();
    auto it = slots_.find(oldest);
    if (now - it->second.last_access < ttl_) break;
    slots_.erase(it);
    lru_.pop_back();
  }
}

std::string VolumeStore::insert(nrrd::Volume volume) {
  auto entry = std::make_shared<Entry>();
  entry->volume = std::move(volume);

  std::lock_guard lock(mutex_);
  const auto now = now_();
  expire_locked(now);
  while (slots_.size() >= capacity_) {
    slots_.erase(lru_.back());
    lru_.pop_back();
  }
  auto id = fresh_id_locked();
  lru_.push_front(id);
  slots_.emplace(id, Slot{std::move(entry), now, lru_.begin()});
  return id;
}

std::shared_ptr<VolumeStore::Entry> VolumeStore::find(std::string_view id) {
  std::lock_guard lock(mutex_);
  const auto now = now_();
  expire_locked(now);
  auto it = slots_.find(std::string(id));
  if (it == slots_.end()) return nullptr;
  it->second.last_access = now;
  lru_.splice(lru_.begin(), lru_, it->second.lru);
  return it->second.entry;
}

bool VolumeStore::erase(std::string_view id) {
  std::lock_guard lock(mutex_);
  auto it = slots_.find(std::string(id));
  if (it == slots_.end()) return false;
  lru_.erase(it->second.lru);
  slots_.erase(it);
  return true;
}

std::size_t VolumeStore::size() const {
  std::lock_guard lock(mutex_);
  return slots_.size();
}

}  // namespace cta::gateway
