#include <algorithm>
#include <cctype>

#include "cta/error.hpp"
#include "cta/inpaint.hpp"

namespace cta::inpaint {

const char* to_string(EngineKind kind) noexcept {
  switch (kind) {
    case EngineKind::diffusion: return "diffusion";
    case EngineKind::fast_marching: return "fmm";
    case EngineKind::external: return "external";
  }
  return "?";
}

std::optional<EngineKind> parse_engine(std::string_view name) noexcept {
  if (name == "diffusion") return EngineKind::diffusion;
  if (name == "fmm" || name == "fast_marching") return EngineKind::fast_marching;
  if (name == "external") return EngineKind::external;
  return std::nullopt;
}

bool valid_uid(std::string_view uid) noexcept {
  if (uid.empty() || uid.size() > 64) return false;
  return std::all_of(uid.begin(), uid.end(),
                     [](unsigned char c) { return std::isalnum(c) || c == '_' || c == '-'; });
}

void EngineConfig::validate() const {
  if (!(diffusion.tolerance > 0)) throw Error(Errc::bad_config, "diffusion tolerance must be > 0");
  if (!(diffusion.omega >= 1 && diffusion.omega < 2)) throw Error(Errc::bad_config, "omega must be in [1, 2)");
  if (diffusion.max_iters < 1) throw Error(Errc::bad_config, "max_iters must be >= 1");
  if (!(fast_marching.radius_eps >= 1)) throw Error(Errc::bad_config, "radius_eps must be >= 1");
  if (!(external.timeout_s > 0)) throw Error(Errc::bad_config, "external timeout must be > 0");
  if (kind == EngineKind::external && external.command.empty())
    throw Error(Errc::bad_config, "external engine command is not configured");
}

InpaintResult run_pipeline(const GrayImage& image, const BinaryMask& hole, const EngineConfig& cfg,
                           std::string_view uid) {
  cfg.validate();
  if (hole.width != image.width || hole.height != image.height)
    throw Error(Errc::size_mismatch, "image and mask sizes differ");
  const auto holes = hole.count();
  if (holes == 0) throw Error(Errc::empty_mask, "mask has no pixels");
  if (holes == hole.size()) throw Error(Errc::full_mask, "mask leaves no context pixels");

  InpaintResult result;
  switch (cfg.kind) {
    case EngineKind::diffusion: {
      const auto started = std::chrono::steady_clock::now();
      auto edge_map = edges::complete_edges(edges::canny(image, hole, cfg.canny), hole, cfg.completion);
      result = inpaint_diffusion(image, hole, edge_map, cfg.diffusion);
      result.engine_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
      break;
    }
    case EngineKind::fast_marching: result = inpaint_fast_marching(image, hole, cfg.fast_marching); break;
    case EngineKind::external: result = inpaint_external(image, hole, uid, cfg.external); break;
  }

  for (std::size_t i = 0; i < image.size(); ++i)
    if (!hole.test(i)) result.image.data[i] = image.data[i];
  return result;
}

}  // namespace cta::inpaint
