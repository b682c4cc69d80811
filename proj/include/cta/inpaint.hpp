#pragma once

#include <chrono>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cta/edgemap.hpp"
#include "cta/image.hpp"

namespace cta::inpaint {

enum class EngineKind { diffusion, fast_marching, external };

const char* to_string(EngineKind kind) noexcept;
/// Accepts "diffusion", "fmm", "fast_marching", "external".
std::optional<EngineKind> parse_engine(std::string_view name) noexcept;

struct DiffusionConfig {
  int max_iters = 20000;
  /// Stop once the largest per-sweep update is below tolerance * 255.
  double tolerance = 1e-4;
  double omega = 1.8;
  /// Treat hitting max_iters as an error instead of a flagged result.
  bool fail_on_nonconvergence = false;
};

struct FastMarchingConfig {
  double radius_eps = 5.0;
};

/// External process contract: `command... <input.png> <mask.png> <output.png>`.
struct ExternalConfig {
  std::vector<std::string> command;
  std::filesystem::path working_dir = std::filesystem::temp_directory_path();
  double timeout_s = 120.0;
};

struct EngineConfig {
  EngineKind kind = EngineKind::diffusion;
  DiffusionConfig diffusion;
  FastMarchingConfig fast_marching;
  ExternalConfig external;
  edges::CannyParams canny;
  edges::CompletionParams completion;

  /// Throws Error(bad_config) when an invariant is violated.
  void validate() const;
};

struct InpaintResult {
  GrayImage image;
  double engine_ms = 0;
  /// SOR sweeps (diffusion) or pixels filled (fast marching).
  int iterations = 0;
  bool converged = true;
  /// Diffusion only: the unrounded solution, row-major, same size as image.
  std::vector<double> field;
  /// External only: captured stdout/stderr of the engine process.
  std::string engine_output;
};

/// Checks that `uid` matches [A-Za-z0-9_-]{1,64}.
bool valid_uid(std::string_view uid) noexcept;

/// Harmonic fill of the hole: Gauss-Seidel / SOR on the 4-neighbour Laplace
/// equation with the known pixels as Dirichlet boundary. Completed edges in
/// `edges` act as barriers: their hole pixels take values interpolated along
/// the edge chain and are not used by neighbouring unknowns, unless a hole
/// component is enclosed by edges and has no other boundary.
InpaintResult inpaint_diffusion(const GrayImage& image, const BinaryMask& hole, const edges::EdgeMap& edges,
                                const DiffusionConfig& cfg = {});
InpaintResult inpaint_diffusion(const GrayImage& image, const BinaryMask& hole, const DiffusionConfig& cfg = {});

/// Telea-style fast-marching fill.
InpaintResult inpaint_fast_marching(const GrayImage& image, const BinaryMask& hole,
                                    const FastMarchingConfig& cfg = {});

/// Writes <uid>_input.png and <uid>_mask.png into the working directory, runs
/// the external command and reads <uid>_output.png. All three files are
/// removed before returning, whatever the outcome.
InpaintResult inpaint_external(const GrayImage& image, const BinaryMask& hole, std::string_view uid,
                               const ExternalConfig& cfg);

/// Full pipeline for a validated pair. Diffusion runs Canny, edge completion
/// and the edge-guided fill; the other engines are single-stage. Unmasked
/// pixels of the result are always copied from `image`.
InpaintResult run_pipeline(const GrayImage& image, const BinaryMask& hole, const EngineConfig& cfg,
                           std::string_view uid = "pipeline");

}  // namespace cta::inpaint
