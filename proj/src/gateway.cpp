#include "cta/gateway.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>

#include "cta/error.hpp"
#include "cta/maskproc.hpp"
#include "cta/png.hpp"
#include "json.hpp"

namespace cta::gateway {

namespace {

using nlohmann::json;

Reply json_reply(int status, const json& body) { return Reply{status, "application/json", body.dump(), {}}; }

Reply error_reply(int status, const std::string& message, const std::vector<std::string>& fields = {}) {
  json body{{"error", message}};
  if (!fields.empty()) body["fields"] = fields;
  return json_reply(status, body);
}

int status_for(Errc code) { return is_input_error(code) ? 400 : 500; }

std::optional<double> to_double(std::string_view s) {
  if (s.empty()) return std::nullopt;
  double v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) return std::nullopt;
  return v;
}

std::optional<std::size_t> to_index(std::string_view s) {
  if (s.empty()) return std::nullopt;
  std::size_t v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) return std::nullopt;
  return v;
}

// Reads a JSON array of exactly kRoiRgbaLength integers in 0..255.
std::optional<PixelBuffer> read_rgba(const json& body, const char* field, std::string& why) {
  const auto it = body.find(field);
  if (it == body.end()) {
    why = std::string("missing field '") + field + "'";
    return std::nullopt;
  }
  if (!it->is_array()) {
    why = std::string("'") + field + "' must be an array";
    return std::nullopt;
  }
  if (it->size() != kRoiRgbaLength) {
    why = std::string("'") + field + "' has " + std::to_string(it->size()) + " entries, expected " +
          std::to_string(kRoiRgbaLength);
    return std::nullopt;
  }
  PixelBuffer buf(kRoiSize, kRoiSize);
  std::size_t i = 0;
  for (const auto& v : *it) {
    if (!v.is_number_integer() || v.get<long long>() < 0 || v.get<long long>() > 255) {
      why = std::string("'") + field + "'[" + std::to_string(i) + "] is not an integer in 0..255";
      return std::nullopt;
    }
    buf.data[i++] = std::uint8_t(v.get<int>());
  }
  return buf;
}

class UidClaim {
 public:
  UidClaim(std::mutex& m, std::set<std::string, std::less<>>& uids, std::string_view uid) : m_(m), uids_(uids) {
    std::lock_guard lock(m_);
    claimed_ = uids_.emplace(uid).second;
    if (claimed_) uid_ = uid;
  }
  ~UidClaim() {
    if (!claimed_) return;
    std::lock_guard lock(m_);
    uids_.erase(uid_);
  }
  bool claimed() const { return claimed_; }

 private:
  std::mutex& m_;
  std::set<std::string, std::less<>>& uids_;
  std::string uid_;
  bool claimed_ = false;
};

void remove_uid_files(const std::filesystem::path& dir, std::string_view uid) {
  std::error_code ec;
  for (const char* suffix : {"_input.png", "_mask.png", "_output.png"})
    std::filesystem::remove(dir / (std::string(uid) + suffix), ec);
}

}  // namespace

const std::string* Reply::header(std::string_view name) const {
  for (const auto& [k, v] : headers)
    if (k == name) return &v;
  return nullptr;
}

std::string Timing::header_value() const {
  char buf[128];
  std::snprintf(buf, sizeof buf, "%.3f,%.3f,%.3f,%.3f", received, engine_start, engine_end, responded);
  return buf;
}

std::optional<Timing> Timing::parse(std::string_view value) {
  double parts[4];
  for (int i = 0; i < 4; ++i) {
    const auto comma = value.find(',');
    if ((i < 3) == (comma == std::string_view::npos)) return std::nullopt;
    const auto v = to_double(value.substr(0, comma));
    if (!v) return std::nullopt;
    parts[i] = *v;
    value = i < 3 ? value.substr(comma + 1) : std::string_view{};
  }
  return Timing{parts[0], parts[1], parts[2], parts[3]};
}

std::string rgba_json(const PixelBuffer& buffer) {
  std::string out;
  out.reserve(buffer.data.size() * 4 + 2);
  out += '[';
  char num[4];
  for (std::size_t i = 0; i < buffer.data.size(); ++i) {
    if (i) out += ',';
    const auto [p, ec] = std::to_chars(num, num + sizeof num, int(buffer.data[i]));
    out.append(num, p);
  }
  out += ']';
  return out;
}

std::string inpaint_request_json(const PixelBuffer& image, const PixelBuffer& mask) {
  return "{\"image\":" + rgba_json(image) + ",\"mask\":" + rgba_json(mask) + "}";
}

Gateway::Gateway(GatewayConfig config)
    : config_(std::move(config)), volumes_(config_.session_ttl, config_.session_cap) {}

Reply Gateway::health() const {
  return json_reply(200, {{"status", "ok"}, {"engine", inpaint::to_string(config_.engine.kind)}});
}

Reply Gateway::inpaint(std::string_view uid, std::string_view engine, std::string_view body,
                       Clock::time_point received) {
  Clock::time_point engine_start{}, engine_end{};
  auto finish = [&](Reply reply) {
    const auto responded = Clock::now();
    if (engine_start == Clock::time_point{}) engine_start = engine_end = responded;
    auto ms = [&](Clock::time_point t) { return std::chrono::duration<double, std::milli>(t - received).count(); };
    const Timing timing{0.0, ms(engine_start), ms(engine_end), ms(responded)};
    reply.headers.emplace_back(kTimingHeader, timing.header_value());
    return reply;
  };

  if (!inpaint::valid_uid(uid)) return finish(error_reply(400, "ValidationFailed: uid must match [A-Za-z0-9_-]{1,64}", {"uid"}));

  auto cfg = config_.engine;
  if (!engine.empty()) {
    const auto kind = inpaint::parse_engine(engine);
    if (!kind) return finish(error_reply(400, "ValidationFailed: unknown engine '" + std::string(engine) + "'", {"engine"}));
    cfg.kind = *kind;
  }
  if (cfg.kind == inpaint::EngineKind::external && cfg.external.command.empty())
    return finish(error_reply(400, "ValidationFailed: external engine is not configured on this server", {"engine"}));

  const UidClaim claim(uid_mutex_, uids_in_flight_, uid);
  if (!claim.claimed()) return finish(error_reply(409, "uid '" + std::string(uid) + "' is already being processed", {"uid"}));

  struct Cleanup {
    const std::filesystem::path& dir;
    std::string_view uid;
    ~Cleanup() { remove_uid_files(dir, uid); }
  } cleanup{cfg.external.working_dir, uid};

  json parsed;
  try {
    parsed = json::parse(body);
  } catch (const json::exception& e) {
    return finish(error_reply(400, std::string("ValidationFailed: body is not valid JSON: ") + e.what(), {"body"}));
  }
  if (!parsed.is_object()) return finish(error_reply(400, "ValidationFailed: body must be a JSON object", {"body"}));

  std::vector<std::string> fields, reasons;
  std::string why;
  auto image = read_rgba(parsed, "image", why);
  if (!image) {
    fields.push_back("image");
    reasons.push_back(why);
  }
  auto mask = read_rgba(parsed, "mask", why);
  if (!mask) {
    fields.push_back("mask");
    reasons.push_back(why);
  }
  if (!fields.empty()) {
    std::string msg = "ValidationFailed:";
    for (const auto& r : reasons) msg += " " + r + ";";
    return finish(error_reply(400, msg, fields));
  }

  const auto gray = maskproc::reduce_grayscale(*image);
  const auto hole = maskproc::binarize_mask(*mask);
  const auto report = maskproc::validate_pair(gray.image, hole);
  if (!report.ok()) {
    std::string msg = "ValidationFailed:";
    for (const auto& v : report.violations) msg += " " + v + ";";
    return finish(error_reply(400, msg, {"mask"}));
  }

  try {
    engine_start = Clock::now();
    auto result = inpaint::run_pipeline(gray.image, hole, cfg, uid);
    engine_end = Clock::now();

    Reply reply{200, "application/json", "{\"result\":" + rgba_json(raster::to_rgba(result.image)) + "}", {}};
    reply.headers.emplace_back("X-Inpaint-Engine", inpaint::to_string(cfg.kind));
    if (!result.converged) reply.headers.emplace_back("X-Inpaint-Converged", "false");
    if (gray.divergent_pixels)
      reply.headers.emplace_back("X-Inpaint-Channel-Divergence", std::to_string(gray.divergent_pixels));
    return finish(std::move(reply));
  } catch (const Error& e) {
    if (engine_end == Clock::time_point{}) engine_end = Clock::now();
    return finish(error_reply(status_for(e.code()), e.what()));
  }
}

Reply Gateway::upload_volume(std::string_view nrrd_bytes) {
  try {
    auto volume = nrrd::parse_nrrd(nrrd_bytes);
    const auto dims = volume.dims();
    const auto type = volume.voxel_type();
    const auto id = volumes_.insert(std::move(volume));
    return json_reply(200, {{"volume_id", id}, {"dims", {dims.nx, dims.ny, dims.nz}}, {"voxel_type", nrrd::to_string(type)}});
  } catch (const Error& e) {
    return error_reply(400, e.what());
  }
}

Reply Gateway::get_slice(std::string_view id, std::string_view k, std::string_view window, std::string_view level) {
  const auto entry = volumes_.find(id);
  if (!entry) return error_reply(404, "UnknownVolume: " + std::string(id));
  const auto index = to_index(k);
  if (!index) return error_reply(400, "IndexOutOfRange: slice index '" + std::string(k) + "'", {"k"});
  const auto w = window.empty() ? std::optional(config_.window) : to_double(window);
  const auto l = level.empty() ? std::optional(config_.level) : to_double(level);
  if (!w) return error_reply(400, "ValidationFailed: window '" + std::string(window) + "'", {"window"});
  if (!l) return error_reply(400, "ValidationFailed: level '" + std::string(level) + "'", {"level"});
  try {
    nrrd::SliceImage slice;
    {
      std::shared_lock lock(entry->mutex);
      slice = nrrd::extract_axial_slice(entry->volume, *index);
    }
    return Reply{200, "image/png", png::encode(raster::window_level(slice, *w, *l)), {}};
  } catch (const Error& e) {
    return error_reply(status_for(e.code()), e.what());
  }
}

Reply Gateway::apply_patch(std::string_view id, std::string_view k, std::string_view body) {
  const auto entry = volumes_.find(id);
  if (!entry) return error_reply(404, "UnknownVolume: " + std::string(id));
  const auto index = to_index(k);
  if (!index) return error_reply(400, "IndexOutOfRange: slice index '" + std::string(k) + "'", {"k"});

  json parsed;
  try {
    parsed = json::parse(body);
  } catch (const json::exception& e) {
    return error_reply(400, std::string("ValidationFailed: body is not valid JSON: ") + e.what(), {"body"});
  }
  const auto origin = parsed.find("origin");
  if (origin == parsed.end() || !origin->is_array() || origin->size() != 2 || !(*origin)[0].is_number_unsigned() ||
      !(*origin)[1].is_number_unsigned())
    return error_reply(400, "ValidationFailed: 'origin' must be [x0, y0] with non-negative integers", {"origin"});
  std::string why;
  const auto result = read_rgba(parsed, "result", why);
  if (!result) return error_reply(400, "ValidationFailed: " + why, {"result"});

  // Optional inverse display mapping; without it gray values are written as-is.
  std::optional<std::pair<double, double>> windowing;
  if (parsed.contains("window") || parsed.contains("level")) {
    const auto w = parsed.value("window", config_.window);
    const auto l = parsed.value("level", config_.level);
    if (!(w > 0)) return error_reply(400, "NonPositiveWindow: window must be > 0", {"window"});
    windowing.emplace(w, l);
  }

  const auto gray = maskproc::reduce_grayscale(*result).image;
  nrrd::SliceImage patch;
  patch.width = patch.height = kRoiSize;
  patch.slice_index = *index;
  patch.values.resize(gray.size());
  for (std::size_t i = 0; i < gray.size(); ++i)
    patch.values[i] = windowing ? raster::gray_to_value(gray.data[i], windowing->first, windowing->second)
                                : double(gray.data[i]);

  const nrrd::Origin at{(*origin)[0].get<std::size_t>(), (*origin)[1].get<std::size_t>()};
  try {
    std::unique_lock lock(entry->mutex);
    patch.voxel_type = entry->volume.voxel_type();
    nrrd::apply_axial_patch_in_place(entry->volume, *index, at, patch);
  } catch (const Error& e) {
    return error_reply(status_for(e.code()), e.what(), {"origin"});
  }
  return json_reply(200, {{"status", "ok"}, {"volume_id", std::string(id)}, {"slice", *index}, {"origin", {at.x, at.y}}});
}

Reply Gateway::download_volume(std::string_view id) {
  const auto entry = volumes_.find(id);
  if (!entry) return error_reply(404, "UnknownVolume: " + std::string(id));
  std::string bytes;
  {
    std::shared_lock lock(entry->mutex);
    bytes = nrrd::write_nrrd(entry->volume);
  }
  Reply reply{200, "application/octet-stream", std::move(bytes), {}};
  reply.headers.emplace_back("Content-Disposition", "attachment; filename=\"volume_" + std::string(id) + ".nrrd\"");
  return reply;
}

}  // namespace cta::gateway
