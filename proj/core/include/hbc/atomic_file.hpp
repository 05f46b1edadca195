#pragma once

#include <filesystem>
#include <string_view>

namespace hbc {

/// Writes `contents` to a sibling temp file and renames it over `path`, so readers
/// never observe a partial file. Throws Error(IoError).
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

}  // namespace hbc
