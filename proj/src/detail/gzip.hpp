#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace cta::detail {

// Inflates a gzip or zlib stream. Throws Error(io_error) on corrupt input.
std::vector<std::byte> gunzip(std::span<const std::byte> compressed);

std::vector<std::byte> gzip(std::span<const std::byte> plain);

}  // namespace cta::detail
