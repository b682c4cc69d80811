#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace cta::io {

/// Whole file as bytes. Throws Error(io_error).
std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view bytes);

}  // namespace cta::io
