#pragma once

#include <string>

#include "cta/gateway.hpp"
#include "cta/raster.hpp"
#include "json.hpp"

namespace cta::test {

inline std::string inpaint_body(const GrayImage& image, const BinaryMask& mask) {
  return gateway::inpaint_request_json(raster::to_rgba(image), raster::to_rgba(mask));
}

/// Parses the "result" array of a successful /inpaint reply.
inline PixelBuffer result_buffer(const std::string& body) {
  const auto parsed = nlohmann::json::parse(body);
  const auto& result = parsed.at("result");
  PixelBuffer out(kRoiSize, kRoiSize);
  if (result.size() != out.data.size()) return PixelBuffer{};
  for (std::size_t i = 0; i < out.data.size(); ++i) out.data[i] = result[i].get<std::uint8_t>();
  return out;
}

inline std::string patch_body(std::size_t x0, std::size_t y0, const GrayImage& gray) {
  return "{\"origin\":[" + std::to_string(x0) + "," + std::to_string(y0) +
         "],\"result\":" + gateway::rgba_json(raster::to_rgba(gray)) + "}";
}

}  // namespace cta::test
