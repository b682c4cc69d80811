#include "detail/gzip.hpp"

#include <zlib.h>

#include <limits>

#include "cta/error.hpp"

namespace cta::detail {

namespace {

constexpr std::size_t kChunk = 1 << 16;

Bytef* as_bytef(const std::byte* p) { return reinterpret_cast<Bytef*>(const_cast<std::byte*>(p)); }

}  // namespace

std::vector<std::byte> gunzip(std::span<const std::byte> compressed) {
  z_stream zs{};
  // 15 + 32: accept both gzip and zlib wrappers.
  if (inflateInit2(&zs, 15 + 32) != Z_OK) throw Error(Errc::io_error, "inflateInit2 failed");

  std::vector<std::byte> out;
  std::size_t consumed = 0;
  int rc = Z_OK;
  while (rc != Z_STREAM_END) {
    if (zs.avail_in == 0 && consumed < compressed.size()) {
      const auto n = std::min<std::size_t>(compressed.size() - consumed, std::numeric_limits<uInt>::max());
      zs.next_in = as_bytef(compressed.data() + consumed);
      zs.avail_in = static_cast<uInt>(n);
      consumed += n;
    }
    const auto old = out.size();
    out.resize(old + kChunk);
    zs.next_out = as_bytef(out.data() + old);
    zs.avail_out = kChunk;
    rc = inflate(&zs, Z_NO_FLUSH);
    out.resize(old + (kChunk - zs.avail_out));
    if (rc == Z_BUF_ERROR && zs.avail_in == 0 && consumed == compressed.size()) break;  // truncated stream
    if (rc != Z_OK && rc != Z_STREAM_END && rc != Z_BUF_ERROR) {
      inflateEnd(&zs);
      throw Error(Errc::io_error, std::string("corrupt gzip stream: ") + (zs.msg ? zs.msg : "unknown"));
    }
  }
  inflateEnd(&zs);
  return out;
}

std::vector<std::byte> gzip(std::span<const std::byte> plain) {
  z_stream zs{};
  if (deflateInit2(&zs, Z_DEFAULT_COMPRESSION, Z_DEFLATED, 15 + 16, 8, Z_DEFAULT_STRATEGY) != Z_OK)
    throw Error(Errc::io_error, "deflateInit2 failed");

  std::vector<std::byte> out(deflateBound(&zs, static_cast<uLong>(plain.size())));
  zs.next_in = as_bytef(plain.data());
  zs.avail_in = static_cast<uInt>(plain.size());
  zs.next_out = as_bytef(out.data());
  zs.avail_out = static_cast<uInt>(out.size());
  const int rc = deflate(&zs, Z_FINISH);
  deflateEnd(&zs);
  if (rc != Z_STREAM_END) throw Error(Errc::io_error, "deflate failed");
  out.resize(zs.total_out);
  return out;
}

}  // namespace cta::detail
