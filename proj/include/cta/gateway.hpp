#pragma once

#include <chrono>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cta/inpaint.hpp"
#include "cta/raster.hpp"
#include "cta/volume_store.hpp"

namespace cta::gateway {

using Clock = std::chrono::steady_clock;

/// Transport-independent HTTP reply.
struct Reply {
  int status = 200;
  std::string content_type = "application/json";
  std::string body;
  std::vector<std::pair<std::string, std::string>> headers;

  const std::string* header(std::string_view name) const;
};

/// Server-side timestamps of one /inpaint request, in milliseconds relative
/// to the moment the request was received.
struct Timing {
  double received = 0;
  double engine_start = 0;
  double engine_end = 0;
  double responded = 0;

  double pre_ms() const noexcept { return engine_start - received; }
  double engine_ms() const noexcept { return engine_end - engine_start; }
  double post_ms() const noexcept { return responded - engine_end; }
  double total_ms() const noexcept { return responded - received; }
  bool monotone() const noexcept {
    return received <= engine_start && engine_start <= engine_end && engine_end <= responded;
  }

  /// "received,engine_start,engine_end,responded" with millisecond values.
  std::string header_value() const;
  static std::optional<Timing> parse(std::string_view header_value);
};

inline constexpr const char* kTimingHeader = "X-Inpaint-Timing";

struct GatewayConfig {
  inpaint::EngineConfig engine;
  std::chrono::seconds session_ttl{2 * 60 * 60};
  std::size_t session_cap = 32;
  double window = raster::kDefaultWindow;
  double level = raster::kDefaultLevel;
};

/// Request handlers behind the HTTP routes. Every method is safe to call
/// concurrently.
class Gateway {
 public:
  explicit Gateway(GatewayConfig config);

  /// POST /inpaint?uid=..&engine=..  `engine` may be empty (server default).
  Reply inpaint(std::string_view uid, std::string_view engine, std::string_view body,
                Clock::time_point received = Clock::now());

  /// POST /volumes
  Reply upload_volume(std::string_view nrrd_bytes);
  /// GET /volumes/{id}/slices/{k}?window=&level=  (empty strings = defaults)
  Reply get_slice(std::string_view id, std::string_view k, std::string_view window, std::string_view level);
  /// POST /volumes/{id}/slices/{k}/patch
  Reply apply_patch(std::string_view id, std::string_view k, std::string_view body);
  /// GET /volumes/{id}/download
  Reply download_volume(std::string_view id);
  /// GET /health
  Reply health() const;

  const GatewayConfig& config() const noexcept { return config_; }
  VolumeStore& volumes() noexcept { return volumes_; }

 private:
  GatewayConfig config_;
  VolumeStore volumes_;
  std::mutex uid_mutex_;
  std::set<std::string, std::less<>> uids_in_flight_;
};

/// JSON array text "[v0,v1,...]" for a flat RGBA buffer.
std::string rgba_json(const PixelBuffer& buffer);

/// Body for POST /inpaint.
std::string inpaint_request_json(const PixelBuffer& image, const PixelBuffer& mask);

}  // namespace cta::gateway
