#include <chrono>
#include <fstream>
#include <system_error>

#include "cta/error.hpp"
#include "cta/inpaint.hpp"
#include "cta/io.hpp"
#include "cta/maskproc.hpp"
#include "cta/png.hpp"
#include "cta/raster.hpp"
#include "detail/process.hpp"

namespace cta::inpaint {

namespace {

struct UidFiles {
  std::filesystem::path input, mask, output;

  UidFiles(const std::filesystem::path& dir, std::string_view uid)
      : input(dir / (std::string(uid) + "_input.png")),
        mask(dir / (std::string(uid) + "_mask.png")),
        output(dir / (std::string(uid) + "_output.png")) {}

  ~UidFiles() {
    std::error_code ec;
    for (const auto* p : {&input, &mask, &output}) std::filesystem::remove(*p, ec);
  }
};

}  // namespace

InpaintResult inpaint_external(const GrayImage& image, const BinaryMask& hole, std::string_view uid,
                               const ExternalConfig& cfg) {
  const auto started = std::chrono::steady_clock::now();
  if (!valid_uid(uid)) throw Error(Errc::validation_failed, "uid must match [A-Za-z0-9_-]{1,64}");
  if (cfg.command.empty()) throw Error(Errc::bad_config, "external engine command is not configured");
  if (!(cfg.timeout_s > 0)) throw Error(Errc::bad_config, "external engine timeout must be > 0");
  if (hole.width != image.width || hole.height != image.height)
    throw Error(Errc::size_mismatch, "image and mask sizes differ");

  const UidFiles files(cfg.working_dir, uid);
  GrayImage mask_gray(hole.width, hole.height);
  mask_gray.data = hole.data;
  io::write_file(files.input, png::encode(image));
  io::write_file(files.mask, png::encode(mask_gray));

  auto argv = cfg.command;
  argv.push_back(files.input.string());
  argv.push_back(files.mask.string());
  argv.push_back(files.output.string());
  const auto outcome = detail::run_process(argv, std::chrono::milliseconds(std::llround(cfg.timeout_s * 1000)));

  if (outcome.timed_out)
    throw Error(Errc::engine_timeout, "engine exceeded " + std::to_string(cfg.timeout_s) + " s\n" + outcome.output);
  if (outcome.exit_code != 0)
    throw Error(Errc::engine_failed,
                "engine exited with status " + std::to_string(outcome.exit_code) + "\n" + outcome.output);

  std::ifstream in(files.output, std::ios::binary);
  if (!in) throw Error(Errc::bad_output, "engine did not write " + files.output.filename().string());
  const std::string bytes{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};

  PixelBuffer rgba;
  try {
    rgba = png::decode(bytes);
  } catch (const Error& e) {
    throw Error(Errc::bad_output, e.what());
  }
  if (rgba.width != image.width || rgba.height != image.height)
    throw Error(Errc::bad_output, "engine output is " + std::to_string(rgba.width) + "x" + std::to_string(rgba.height));

  InpaintResult result;
  result.image = maskproc::reduce_grayscale(rgba).image;
  result.engine_output = outcome.output;
  result.engine_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
  return result;
}

}  // namespace cta::inpaint
