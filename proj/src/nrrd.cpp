#include "cta/nrrd.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <limits>
#include <optional>

#include "cta/error.hpp"
#include "detail/gzip.hpp"

namespace cta::nrrd {

namespace {

constexpr Endian host_endian() { return std::endian::native == std::endian::little ? Endian::little : Endian::big; }

template <typename F>
decltype(auto) dispatch(VoxelType type, F&& f) {
  switch (type) {
    case VoxelType::uint8: return f(std::uint8_t{});
    case VoxelType::int16: return f(std::int16_t{});
    case VoxelType::uint16: return f(std::uint16_t{});
    case VoxelType::int32: return f(std::int32_t{});
    case VoxelType::float32: return f(float{});
    case VoxelType::float64: return f(double{});
  }
  return f(std::uint8_t{});
}

template <typename T>
T convert_to(double v) noexcept {
  if constexpr (std::is_floating_point_v<T>) {
    return static_cast<T>(v);
  } else {
    if (std::isnan(v)) return T{0};
    const double r = std::round(v);
    if (r <= double(std::numeric_limits<T>::min())) return std::numeric_limits<T>::min();
    if (r >= double(std::numeric_limits<T>::max())) return std::numeric_limits<T>::max();
    return static_cast<T>(r);
  }
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return char(std::tolower(c)); });
  return out;
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    const auto b = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t') ++i;
    if (i > b) out.push_back(s.substr(b, i - b));
  }
  return out;
}

std::optional<long long> to_int(std::string_view s) {
  long long v = 0;
  const auto* end = s.data() + s.size();
  const auto [p, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc{} || p != end) return std::nullopt;
  return v;
}

std::optional<VoxelType> voxel_type_from_name(std::string_view name) {
  // Type spellings accepted by the NRRD format for the supported scalar types.
  static const std::pair<const char*, VoxelType> table[] = {
      {"uchar", VoxelType::uint8},          {"unsigned char", VoxelType::uint8},
      {"uint8", VoxelType::uint8},          {"uint8_t", VoxelType::uint8},
      {"short", VoxelType::int16},          {"short int", VoxelType::int16},
      {"signed short", VoxelType::int16},   {"signed short int", VoxelType::int16},
      {"int16", VoxelType::int16},          {"int16_t", VoxelType::int16},
      {"ushort", VoxelType::uint16},        {"unsigned short", VoxelType::uint16},
      {"unsigned short int", VoxelType::uint16}, {"uint16", VoxelType::uint16},
      {"uint16_t", VoxelType::uint16},      {"int", VoxelType::int32},
      {"signed int", VoxelType::int32},     {"int32", VoxelType::int32},
      {"int32_t", VoxelType::int32},        {"float", VoxelType::float32},
      {"double", VoxelType::float64},
  };
  const auto key = lower(name);
  for (const auto& [n, t] : table)
    if (key == n) return t;
  return std::nullopt;
}

void swap_bytes(std::span<std::byte> data, std::size_t element) {
  if (element <= 1) return;
  for (std::size_t i = 0; i + element <= data.size(); i += element)
    std::reverse(data.begin() + std::ptrdiff_t(i), data.begin() + std::ptrdiff_t(i + element));
}

struct RequiredFields {
  std::optional<VoxelType> type;
  std::optional<long long> dimension;
  std::optional<Dims> sizes;
  std::optional<Encoding> encoding;
  std::optional<Endian> endian;
};

void require_unset(bool already_set, std::string_view name) {
  if (already_set) throw Error(Errc::malformed_header, "duplicate field '" + std::string(name) + "'");
}

// Returns true when the field was consumed into `req`.
bool interpret_field(const std::string& key, std::string_view value, RequiredFields& req) {
  if (key == "type") {
    require_unset(req.type.has_value(), key);
    req.type = voxel_type_from_name(value);
    if (!req.type) throw Error(Errc::unsupported_field, "voxel type '" + std::string(value) + "'");
    return true;
  }
  if (key == "dimension") {
    require_unset(req.dimension.has_value(), key);
    req.dimension = to_int(value);
    if (!req.dimension) throw Error(Errc::malformed_header, "dimension '" + std::string(value) + "'");
    if (*req.dimension != 3)
      throw Error(Errc::unsupported_field, "dimension " + std::to_string(*req.dimension) + " (only 3 is supported)");
    return true;
  }
  if (key == "sizes") {
    require_unset(req.sizes.has_value(), key);
    const auto parts = split_ws(value);
    if (parts.size() != 3) throw Error(Errc::malformed_header, "sizes must list 3 values");
    std::size_t n[3];
    for (int i = 0; i < 3; ++i) {
      const auto v = to_int(parts[std::size_t(i)]);
      if (!v || *v < 1) throw Error(Errc::malformed_header, "sizes entry '" + std::string(parts[std::size_t(i)]) + "'");
      n[i] = std::size_t(*v);
    }
    req.sizes = Dims{n[0], n[1], n[2]};
    return true;
  }
  if (key == "encoding") {
    require_unset(req.encoding.has_value(), key);
    const auto e = lower(value);
    if (e == "raw") req.encoding = Encoding::raw;
    else if (e == "gzip" || e == "gz") req.encoding = Encoding::gzip;
    else throw Error(Errc::unsupported_field, "encoding '" + std::string(value) + "'");
    return true;
  }
  if (key == "endian") {
    require_unset(req.endian.has_value(), key);
    const auto e = lower(value);
    if (e == "little") req.endian = Endian::little;
    else if (e == "big") req.endian = Endian::big;
    else throw Error(Errc::malformed_header, "endian '" + std::string(value) + "'");
    return true;
  }
  if (key == "data file" || key == "datafile")
    throw Error(Errc::unsupported_field, "detached data files are not supported");
  if (key == "line skip" || key == "lineskip" || key == "byte skip" || key == "byteskip") {
    const auto v = to_int(value);
    if (!v || *v != 0) throw Error(Errc::unsupported_field, "'" + key + "' must be 0 for attached headers");
    return true;
  }
  return false;
}

}  // namespace

std::size_t voxel_size(VoxelType type) noexcept {
  return dispatch(type, [](auto t) { return sizeof(t); });
}

const char* to_string(VoxelType type) noexcept {
  switch (type) {
    case VoxelType::uint8: return "uint8";
    case VoxelType::int16: return "int16";
    case VoxelType::uint16: return "uint16";
    case VoxelType::int32: return "int32";
    case VoxelType::float32: return "float32";
    case VoxelType::float64: return "float64";
  }
  return "?";
}

const char* nrrd_type_name(VoxelType type) noexcept {
  switch (type) {
    case VoxelType::uint8: return "unsigned char";
    case VoxelType::int16: return "short";
    case VoxelType::uint16: return "unsigned short";
    case VoxelType::int32: return "int";
    case VoxelType::float32: return "float";
    case VoxelType::float64: return "double";
  }
  return "?";
}

const char* to_string(Encoding encoding) noexcept { return encoding == Encoding::raw ? "raw" : "gzip"; }
const char* to_string(Endian endian) noexcept { return endian == Endian::little ? "little" : "big"; }

std::string HeaderLine::text() const {
  switch (kind) {
    case Kind::comment: return value;
    case Kind::key_value: return key + ":=" + value;
    case Kind::field: break;
  }
  return key + ": " + value;
}

Volume::Volume(Dims dims, VoxelType type, Encoding encoding, Endian endianness)
    : dims_(dims), type_(type), encoding_(encoding), endianness_(endianness),
      data_(dims.count() * voxel_size(type)) {}

double Volume::value(std::size_t i) const noexcept {
  return dispatch(type_, [&](auto t) {
    decltype(t) v;
    std::memcpy(&v, data_.data() + i * sizeof(v), sizeof(v));
    return double(v);
  });
}

void Volume::store(std::size_t i, double v) noexcept {
  dispatch(type_, [&](auto t) {
    const auto c = convert_to<decltype(t)>(v);
    std::memcpy(data_.data() + i * sizeof(c), &c, sizeof(c));
  });
}

bool Volume::same_voxels(const Volume& other) const noexcept {
  return dims_ == other.dims_ && type_ == other.type_ && data_ == other.data_;
}

Volume parse_nrrd(std::string_view bytes) {
  return parse_nrrd(std::span<const std::byte>(reinterpret_cast<const std::byte*>(bytes.data()), bytes.size()));
}

Volume parse_nrrd(std::span<const std::byte> bytes) {
  const std::string_view text(reinterpret_cast<const char*>(bytes.data()), bytes.size());

  auto next_line = [&](std::size_t& pos) -> std::optional<std::string_view> {
    if (pos >= text.size()) return std::nullopt;
    const auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) {
      // A header without a terminating blank line.
      throw Error(Errc::malformed_header, "header is not terminated by an empty line");
    }
    auto line = text.substr(pos, nl - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    pos = nl + 1;
    return line;
  };

  std::size_t pos = 0;
  {
    const auto magic_end = text.find('\n');
    auto magic = text.substr(0, std::min(magic_end, text.size()));
    if (!magic.empty() && magic.back() == '\r') magic.remove_suffix(1);
    if (magic.size() != 8 || magic.substr(0, 7) != "NRRD000" || magic[7] < '1' || magic[7] > '5')
      throw Error(Errc::magic_mismatch, "stream does not start with NRRD0001..NRRD0005");
    if (magic_end == std::string_view::npos) throw Error(Errc::malformed_header, "missing header after magic");
    pos = magic_end + 1;
  }

  RequiredFields req;
  std::vector<HeaderLine> passthrough;
  for (;;) {
    const auto line = next_line(pos);
    if (!line) throw Error(Errc::malformed_header, "header is not terminated by an empty line");
    if (line->empty()) break;
    if (line->front() == '#') {
      passthrough.push_back({HeaderLine::Kind::comment, {}, std::string(*line)});
      continue;
    }
    const auto colon = line->find(':');
    if (colon == std::string_view::npos || colon == 0 || colon + 1 >= line->size())
      throw Error(Errc::malformed_header, "unparseable header line '" + std::string(*line) + "'");
    const auto key = std::string(line->substr(0, colon));
    if ((*line)[colon + 1] == '=') {
      passthrough.push_back({HeaderLine::Kind::key_value, key, std::string(line->substr(colon + 2))});
      continue;
    }
    if ((*line)[colon + 1] != ' ')
      throw Error(Errc::malformed_header, "field '" + key + "' lacks ': ' separator");
    const auto value = trim(line->substr(colon + 2));
    if (!interpret_field(lower(key), value, req))
      passthrough.push_back({HeaderLine::Kind::field, key, std::string(line->substr(colon + 2))});
  }

  if (!req.type) throw Error(Errc::malformed_header, "missing required field 'type'");
  if (!req.dimension) throw Error(Errc::malformed_header, "missing required field 'dimension'");
  if (!req.sizes) throw Error(Errc::malformed_header, "missing required field 'sizes'");
  if (!req.encoding) throw Error(Errc::malformed_header, "missing required field 'encoding'");

  Volume vol(*req.sizes, *req.type, *req.encoding, req.endian.value_or(Endian::little));
  vol.passthrough() = std::move(passthrough);

  auto payload = bytes.subspan(pos);
  std::vector<std::byte> inflated;
  if (vol.encoding() == Encoding::gzip) {
    try {
      inflated = detail::gunzip(payload);
    } catch (const Error& e) {
      throw Error(Errc::truncated_data, e.what());
    }
    payload = inflated;
  }

  auto dst = vol.bytes();
  if (payload.size() < dst.size())
    throw Error(Errc::truncated_data, "expected " + std::to_string(dst.size()) + " data bytes, found " +
                                          std::to_string(payload.size()));
  std::copy_n(payload.begin(), dst.size(), dst.begin());
  if (vol.endianness() != host_endian()) swap_bytes(dst, voxel_size(vol.voxel_type()));
  return vol;
}

std::string write_nrrd(const Volume& volume) {
  const auto& d = volume.dims();
  std::string out = "NRRD0004\n";
  out += "type: ";
  out += nrrd_type_name(volume.voxel_type());
  out += "\ndimension: 3\nsizes: " + std::to_string(d.nx) + ' ' + std::to_string(d.ny) + ' ' + std::to_string(d.nz);
  out += "\nencoding: ";
  out += to_string(volume.encoding());
  out += '\n';
  const auto element = voxel_size(volume.voxel_type());
  if (element > 1) {
    out += "endian: ";
    out += to_string(volume.endianness());
    out += '\n';
  }
  for (const auto& line : volume.passthrough()) out += line.text() + '\n';
  out += '\n';

  std::vector<std::byte> payload(volume.bytes().begin(), volume.bytes().end());
  if (volume.endianness() != host_endian()) swap_bytes(payload, element);
  if (volume.encoding() == Encoding::gzip) payload = detail::gzip(payload);
  out.append(reinterpret_cast<const char*>(payload.data()), payload.size());
  return out;
}

SliceImage extract_axial_slice(const Volume& volume, std::size_t k) {
  const auto& d = volume.dims();
  return extract_axial_region(volume, k, {0, 0}, int(d.nx), int(d.ny));
}

SliceImage extract_axial_region(const Volume& volume, std::size_t k, Origin origin, int width, int height) {
  const auto& d = volume.dims();
  if (k >= d.nz)
    throw Error(Errc::index_out_of_range, "slice " + std::to_string(k) + " not in [0, " + std::to_string(d.nz) + ")");
  if (width < 1 || height < 1 || origin.x + std::size_t(width) > d.nx || origin.y + std::size_t(height) > d.ny)
    throw Error(Errc::patch_out_of_bounds, "region exceeds slice bounds");

  SliceImage s;
  s.width = width;
  s.height = height;
  s.slice_index = k;
  s.voxel_type = volume.voxel_type();
  s.values.resize(std::size_t(width) * std::size_t(height));
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x) s.at(x, y) = volume.at(origin.x + std::size_t(x), origin.y + std::size_t(y), k);
  return s;
}

void apply_axial_patch_in_place(Volume& volume, std::size_t k, Origin origin, const SliceImage& patch) {
  const auto& d = volume.dims();
  if (patch.width != 100 || patch.height != 100 || patch.values.size() != 10000)
    throw Error(Errc::size_mismatch, "patch must be 100x100, got " + std::to_string(patch.width) + "x" +
                                         std::to_string(patch.height));
  if (k >= d.nz || origin.x + 100 > d.nx || origin.y + 100 > d.ny)
    throw Error(Errc::patch_out_of_bounds, "patch at (" + std::to_string(origin.x) + "," + std::to_string(origin.y) +
                                               "," + std::to_string(k) + ") exceeds volume " + std::to_string(d.nx) +
                                               "x" + std::to_string(d.ny) + "x" + std::to_string(d.nz));
  for (int y = 0; y < 100; ++y)
    for (int x = 0; x < 100; ++x)
      volume.store(volume.index(origin.x + std::size_t(x), origin.y + std::size_t(y), k), patch.at(x, y));
}

Volume apply_axial_patch(const Volume& volume, std::size_t k, Origin origin, const SliceImage& patch) {
  Volume out = volume;
  apply_axial_patch_in_place(out, k, origin, patch);
  return out;
}

}  // namespace cta::nrrd
