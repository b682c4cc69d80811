// Command-line front end: serve the gateway, inpaint files, patch volumes and
// measure the request timing breakdown.

#include <pthread.h>
#include <signal.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cta/edgemap.hpp"
#include "cta/error.hpp"
#include "cta/gateway.hpp"
#include "cta/inpaint.hpp"
#include "cta/io.hpp"
#include "cta/maskproc.hpp"
#include "cta/nrrd.hpp"
#include "cta/png.hpp"
#include "cta/raster.hpp"
#include "cta/service.hpp"
#include "httplib.h"
#include "json.hpp"

namespace {

using namespace cta;

constexpr int kExitOk = 0;
constexpr int kExitStartup = 1;
constexpr int kExitValidation = 2;
constexpr int kExitEngine = 3;

struct EngineOptions {
  std::string engine = "diffusion";
  std::string external_cmd;
  std::string workdir = std::filesystem::temp_directory_path().string();
  double timeout = 120;
};

void add_engine_options(CLI::App* cmd, EngineOptions& opt) {
  cmd->add_option("--engine", opt.engine, "diffusion | fmm | external")->envname("CTA_ENGINE")->capture_default_str();
  cmd->add_option("--external-cmd", opt.external_cmd,
                  "external engine command; called as <cmd> <input.png> <mask.png> <output.png>")
      ->envname("CTA_EXTERNAL_CMD");
  cmd->add_option("--workdir", opt.workdir, "directory for engine temp files")
      ->envname("CTA_WORKDIR")
      ->capture_default_str();
  cmd->add_option("--timeout", opt.timeout, "external engine timeout in seconds")
      ->envname("CTA_TIMEOUT")
      ->capture_default_str();
}

std::vector<std::string> split_words(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> words;
  for (std::string w; in >> w;) words.push_back(w);
  return words;
}

inpaint::EngineConfig engine_config(const EngineOptions& opt) {
  inpaint::EngineConfig cfg;
  const auto kind = inpaint::parse_engine(opt.engine);
  if (!kind) throw Error(Errc::bad_config, "unknown engine '" + opt.engine + "'");
  cfg.kind = *kind;
  cfg.external.command = split_words(opt.external_cmd);
  cfg.external.working_dir = opt.workdir;
  cfg.external.timeout_s = opt.timeout;
  cfg.validate();
  return cfg;
}

int exit_code_for(const Error& e) { return is_input_error(e.code()) ? kExitValidation : kExitEngine; }

// Reads an image/mask pair from PNG files and checks it against the service contract.
std::pair<GrayImage, BinaryMask> load_pair(const std::string& image_path, const std::string& mask_path) {
  const auto image = maskproc::reduce_grayscale(png::decode(io::read_file(image_path))).image;
  const auto mask = maskproc::binarize_mask(png::decode(io::read_file(mask_path)));
  const auto report = maskproc::validate_pair(image, mask);
  if (!report.ok()) {
    std::string msg;
    for (const auto& v : report.violations) msg += (msg.empty() ? "" : "; ") + v;
    throw Error(Errc::validation_failed, msg);
  }
  return {image, mask};
}

int cmd_run(const EngineOptions& opt, const std::string& image_path, const std::string& mask_path,
            const std::string& out, const std::string& edges_out) {
  const auto cfg = engine_config(opt);
  auto [image, mask] = load_pair(image_path, mask_path);
  const auto result = inpaint::run_pipeline(image, mask, cfg, "cli-run-" + std::to_string(::getpid()));
  io::write_file(out, png::encode(result.image));
  if (!edges_out.empty()) {
    const auto em = edges::complete_edges(edges::canny(image, mask, cfg.canny), mask, cfg.completion);
    io::write_file(edges_out, png::encode(edges::render(em)));
  }
  if (!result.converged) std::cerr << "warning: diffusion stopped at max_iters before converging\n";
  return kExitOk;
}

nrrd::Origin parse_roi(const std::string& roi) {
  const auto comma = roi.find(',');
  std::size_t x0 = 0, y0 = 0;
  if (comma == std::string::npos || std::sscanf(roi.c_str(), "%zu,%zu", &x0, &y0) != 2)
    throw Error(Errc::validation_failed, "--roi must be x0,y0");
  return {x0, y0};
}

int cmd_volume(const EngineOptions& opt, const std::string& volume_path, const std::string& mask_path,
               std::size_t k, const std::string& roi, const std::string& out, double window, double level) {
  const auto cfg = engine_config(opt);
  auto volume = nrrd::parse_nrrd(io::read_file(volume_path));
  const auto origin = parse_roi(roi);
  if (k >= volume.dims().nz) throw Error(Errc::index_out_of_range, "slice " + std::to_string(k) + " out of range");
  if (origin.x + kRoiSize > volume.dims().nx || origin.y + kRoiSize > volume.dims().ny)
    throw Error(Errc::patch_out_of_bounds, "ROI at " + roi + " does not fit the slice");

  const auto region = nrrd::extract_axial_region(volume, k, origin, kRoiSize, kRoiSize);
  const auto gray = raster::window_level(region, window, level);
  const auto mask = maskproc::binarize_mask(png::decode(io::read_file(mask_path)));
  const auto report = maskproc::validate_pair(gray, mask);
  if (!report.ok()) {
    std::string msg;
    for (const auto& v : report.violations) msg += (msg.empty() ? "" : "; ") + v;
    throw Error(Errc::validation_failed, msg);
  }

  const auto result = inpaint::run_pipeline(gray, mask, cfg, "cli-volume-" + std::to_string(::getpid()));
  // Only synthesized pixels go back; context voxels keep their full precision.
  auto patch = region;
  for (std::size_t i = 0; i < patch.values.size(); ++i)
    if (mask.test(i)) patch.values[i] = raster::gray_to_value(result.image.data[i], window, level);
  nrrd::apply_axial_patch_in_place(volume, k, origin, patch);
  io::write_file(out, nrrd::write_nrrd(volume));
  return kExitOk;
}

int cmd_serve(const EngineOptions& opt, const std::string& host, int port, long ttl, std::size_t cap) {
  gateway::GatewayConfig cfg;
  cfg.engine = engine_config(opt);
  cfg.session_ttl = std::chrono::seconds(ttl);
  cfg.session_cap = cap;

  // Block the shutdown signals before any server thread exists so that only
  // sigwait below receives them.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  gateway::Service service(cfg);
  const int bound = service.start(host, port);
  if (bound < 0) {
    std::cerr << "error: cannot bind " << host << ":" << port << "\n";
    return kExitStartup;
  }
  std::cout << "listening on " << host << ":" << bound << std::endl;

  int received = 0;
  sigwait(&signals, &received);
  std::cerr << "shutting down\n";
  service.stop();
  return kExitOk;
}

struct Segment {
  const char* name;
  std::vector<double> ms;
  double mean() const {
    double s = 0;
    for (double v : ms) s += v;
    return ms.empty() ? 0 : s / double(ms.size());
  }
  double min() const { return *std::min_element(ms.begin(), ms.end()); }
  double max() const { return *std::max_element(ms.begin(), ms.end()); }
};

// Synthetic axial-slice-like input: bright disc and bar on a soft background.
std::pair<GrayImage, BinaryMask> bench_pair() {
  GrayImage image(kRoiSize, kRoiSize);
  BinaryMask mask(kRoiSize, kRoiSize);
  for (int y = 0; y < kRoiSize; ++y)
    for (int x = 0; x < kRoiSize; ++x) {
      const double r2 = (x - 50.0) * (x - 50.0) + (y - 50.0) * (y - 50.0);
      int v = 60 + (x + y) / 8;
      if (r2 < 30 * 30) v = 170;
      if (x >= 46 && x < 54) v = 230;
      image.at(x, y) = std::uint8_t(v);
      if (x >= 30 && x < 70 && y >= 40 && y < 60) mask.set(x, y);
    }
  return {image, mask};
}

int cmd_bench(const EngineOptions& opt, int n, const std::string& format) {
  if (n < 1) {
    std::cerr << "error: n must be >= 1\n";
    return kExitValidation;
  }
  gateway::GatewayConfig cfg;
  cfg.engine = engine_config(opt);
  gateway::Service service(cfg);
  const int port = service.start("127.0.0.1", 0);
  if (port < 0) {
    std::cerr << "error: cannot bind loopback port\n";
    return kExitStartup;
  }
  httplib::Client client("127.0.0.1", port);
  client.set_read_timeout(std::chrono::seconds(long(opt.timeout) + 30));

  const auto [image, mask] = bench_pair();
  Segment prep{"client_prep", {}}, network{"network", {}}, overhead{"server_overhead", {}}, engine{"engine", {}},
      handle{"client_handle", {}};
  using Clock = std::chrono::steady_clock;
  auto ms = [](Clock::duration d) { return std::chrono::duration<double, std::milli>(d).count(); };

  for (int i = 0; i < n; ++i) {
    const auto t0 = Clock::now();
    const auto body = gateway::inpaint_request_json(raster::to_rgba(image), raster::to_rgba(mask));
    const auto t1 = Clock::now();
    const auto res = client.Post("/inpaint?uid=bench-" + std::to_string(i) + "&engine=" + opt.engine, body,
                                 "application/json");
    const auto t2 = Clock::now();
    if (!res) {
      std::cerr << "error: request failed: " << httplib::to_string(res.error()) << "\n";
      return kExitEngine;
    }
    if (res->status != 200) {
      std::cerr << "error: HTTP " << res->status << ": " << res->body << "\n";
      return kExitEngine;
    }
    const auto parsed = nlohmann::json::parse(res->body);
    PixelBuffer result(kRoiSize, kRoiSize);
    const auto& arr = parsed.at("result");
    for (std::size_t j = 0; j < result.data.size(); ++j) result.data[j] = arr[j].get<std::uint8_t>();
    const auto gray = maskproc::reduce_grayscale(result).image;
    const auto t3 = Clock::now();
    (void)gray;

    const auto timing = gateway::Timing::parse(res->get_header_value(gateway::kTimingHeader));
    if (!timing) {
      std::cerr << "error: response lacks a timing header\n";
      return kExitEngine;
    }
    prep.ms.push_back(ms(t1 - t0));
    network.ms.push_back(std::max(0.0, ms(t2 - t1) - timing->total_ms()));
    overhead.ms.push_back(timing->pre_ms() + timing->post_ms());
    engine.ms.push_back(timing->engine_ms());
    handle.ms.push_back(ms(t3 - t2));
  }
  service.stop();

  const std::vector<const Segment*> segments{&prep, &network, &overhead, &engine, &handle};
  double total = 0;
  for (const auto* s : segments) total += s->mean();
  const bool tsv = format == "tsv";
  if (tsv) std::printf("segment\tmean_ms\tmin_ms\tmax_ms\tshare_pct\n");
  else std::printf("%-16s %10s %10s %10s %8s\n", "segment", "mean_ms", "min_ms", "max_ms", "share");
  for (const auto* s : segments) {
    const double share = total > 0 ? 100.0 * s->mean() / total : 0;
    if (tsv) std::printf("%s\t%.3f\t%.3f\t%.3f\t%.2f\n", s->name, s->mean(), s->min(), s->max(), share);
    else std::printf("%-16s %10.3f %10.3f %10.3f %7.2f%%\n", s->name, s->mean(), s->min(), s->max(), share);
  }
  if (tsv) std::printf("total\t%.3f\t\t\t100.00\n", total);
  else std::printf("%-16s %10.3f   (n=%d, engine=%s)\n", "total", total, n, opt.engine.c_str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"CTA slice inpainting service and tools"};
  app.require_subcommand(1);

  EngineOptions serve_opt, run_opt, volume_opt, bench_opt;

  auto* serve = app.add_subcommand("serve", "run the HTTP gateway");
  std::string host = "127.0.0.1";
  int port = 8080;
  long ttl = 2 * 60 * 60;
  std::size_t cap = 32;
  add_engine_options(serve, serve_opt);
  serve->add_option("--host", host, "listen address")->envname("CTA_HOST")->capture_default_str();
  serve->add_option("--port", port, "listen port, 0 picks a free one")->envname("CTA_PORT")->capture_default_str();
  serve->add_option("--session-ttl", ttl, "volume session idle timeout in seconds")
      ->envname("CTA_SESSION_TTL")
      ->capture_default_str();
  serve->add_option("--session-cap", cap, "maximum number of volume sessions")
      ->envname("CTA_SESSION_CAP")
      ->capture_default_str();

  auto* run = app.add_subcommand("run", "inpaint a 100x100 image using a mask PNG");
  std::string image_path, mask_path, out, edges_out;
  add_engine_options(run, run_opt);
  run->add_option("image", image_path, "input PNG")->required();
  run->add_option("mask", mask_path, "mask PNG, red channel != 0 marks the hole")->required();
  run->add_option("--out", out, "output PNG")->required();
  run->add_option("--edges-out", edges_out, "also write the edge map as PNG");

  auto* volume = app.add_subcommand("volume", "inpaint a region of an axial slice of an NRRD volume");
  std::string volume_path, vmask_path, roi, vout;
  std::size_t slice = 0;
  double window = raster::kDefaultWindow, level = raster::kDefaultLevel;
  add_engine_options(volume, volume_opt);
  volume->add_option("volume", volume_path, "input NRRD")->required();
  volume->add_option("mask", vmask_path, "100x100 mask PNG")->required();
  volume->add_option("--slice", slice, "axial slice index")->required();
  volume->add_option("--roi", roi, "ROI origin x0,y0 in voxels")->required();
  volume->add_option("--out", vout, "output NRRD")->required();
  volume->add_option("--window", window, "display window")->capture_default_str();
  volume->add_option("--level", level, "display level")->capture_default_str();

  auto* bench = app.add_subcommand("bench", "time n requests against an embedded gateway over loopback");
  int n = 0;
  std::string format = "table";
  add_engine_options(bench, bench_opt);
  bench->add_option("n", n, "number of requests")->required();
  bench->add_option("--format", format, "table | tsv")->check(CLI::IsMember({"table", "tsv"}))->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    if (*serve) return cmd_serve(serve_opt, host, port, ttl, cap);
    if (*run) return cmd_run(run_opt, image_path, mask_path, out, edges_out);
    if (*volume) return cmd_volume(volume_opt, volume_path, vmask_path, slice, roi, vout, window, level);
    if (*bench) return cmd_bench(bench_opt, n, format);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    if (e.code() == Errc::bad_config) return kExitValidation;
    if (e.code() == Errc::io_error) return kExitValidation;
    return exit_code_for(e);
  }
  return kExitOk;
}
