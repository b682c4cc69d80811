#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cta::nrrd {

enum class VoxelType { uint8, int16, uint16, int32, float32, float64 };
enum class Encoding { raw, gzip };
enum class Endian { little, big };

std::size_t voxel_size(VoxelType type) noexcept;
/// Short name used on the wire ("uint8", "int16", ...).
const char* to_string(VoxelType type) noexcept;
/// NRRD canonical type name written into headers ("unsigned char", "short", ...).
const char* nrrd_type_name(VoxelType type) noexcept;
const char* to_string(Encoding encoding) noexcept;
const char* to_string(Endian endian) noexcept;

/// Header line that the parser does not interpret. It is written back
/// unchanged, in the order it was read.
struct HeaderLine {
  enum class Kind { field, key_value, comment };

  Kind kind = Kind::field;
  std::string key;    // empty for comments
  std::string value;  // comment text (including the leading '#') for comments

  std::string text() const;
  friend bool operator==(const HeaderLine&, const HeaderLine&) = default;
};

struct Dims {
  std::size_t nx = 0;
  std::size_t ny = 0;
  std::size_t nz = 0;

  std::size_t count() const noexcept { return nx * ny * nz; }
  friend bool operator==(const Dims&, const Dims&) = default;
};

/// Scalar 3D volume. Voxels are kept in host byte order, x fastest, then y,
/// then z. `endianness` and `encoding` only describe how the volume was (or
/// will be) stored on disk.
class Volume {
 public:
  Volume() = default;
  Volume(Dims dims, VoxelType type, Encoding encoding = Encoding::raw, Endian endianness = Endian::little);

  const Dims& dims() const noexcept { return dims_; }
  VoxelType voxel_type() const noexcept { return type_; }
  Encoding encoding() const noexcept { return encoding_; }
  Endian endianness() const noexcept { return endianness_; }
  void set_encoding(Encoding e) noexcept { encoding_ = e; }
  void set_endianness(Endian e) noexcept { endianness_ = e; }

  std::vector<HeaderLine>& passthrough() noexcept { return passthrough_; }
  const std::vector<HeaderLine>& passthrough() const noexcept { return passthrough_; }

  std::size_t index(std::size_t x, std::size_t y, std::size_t z) const noexcept {
    return (z * dims_.ny + y) * dims_.nx + x;
  }

  /// Voxel value widened to double (exact for every supported type).
  double value(std::size_t i) const noexcept;
  double at(std::size_t x, std::size_t y, std::size_t z) const noexcept { return value(index(x, y, z)); }

  /// Stores `v` converted to the voxel type: integer types round half away
  /// from zero and clamp to the type range (NaN stores 0); float types cast.
  void store(std::size_t i, double v) noexcept;

  std::span<const std::byte> bytes() const noexcept { return data_; }
  std::span<std::byte> bytes() noexcept { return data_; }

  /// True when dims, voxel type and every voxel bit pattern agree.
  bool same_voxels(const Volume& other) const noexcept;

 private:
  Dims dims_;
  VoxelType type_ = VoxelType::uint8;
  Encoding encoding_ = Encoding::raw;
  Endian endianness_ = Endian::little;
  std::vector<HeaderLine> passthrough_;
  std::vector<std::byte> data_;
};

/// Axial slice or in-plane region of a volume. Values are widened to double;
/// `voxel_type` remembers the source type.
struct SliceImage {
  int width = 0;
  int height = 0;
  std::size_t slice_index = 0;
  VoxelType voxel_type = VoxelType::float64;
  std::vector<double> values;

  double at(int x, int y) const noexcept { return values[std::size_t(y) * std::size_t(width) + std::size_t(x)]; }
  double& at(int x, int y) noexcept { return values[std::size_t(y) * std::size_t(width) + std::size_t(x)]; }
};

struct Origin {
  std::size_t x = 0;
  std::size_t y = 0;
};

/// Parses an attached-header NRRD stream (magic NRRD0001..NRRD0005).
Volume parse_nrrd(std::span<const std::byte> bytes);
Volume parse_nrrd(std::string_view bytes);

/// Writes an NRRD0004 stream with attached header using the volume's
/// encoding and endianness.
std::string write_nrrd(const Volume& volume);

SliceImage extract_axial_slice(const Volume& volume, std::size_t k);

/// Rectangular part of axial slice `k` starting at `origin`.
SliceImage extract_axial_region(const Volume& volume, std::size_t k, Origin origin, int width, int height);

/// Returns a copy of `volume` with the 100x100 `patch` written at (origin, k).
Volume apply_axial_patch(const Volume& volume, std::size_t k, Origin origin, const SliceImage& patch);

/// In-place form of apply_axial_patch, for callers holding exclusive access.
void apply_axial_patch_in_place(Volume& volume, std::size_t k, Origin origin, const SliceImage& patch);

}  // namespace cta::nrrd
