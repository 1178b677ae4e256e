#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace pairedval {

// Whole file as a string. Throws InputError(path, "cannot open file").
std::string read_text_file(const std::filesystem::path& path);

// Writes to a sibling temporary and renames it over `path`, so readers never
// observe a partial file. Creates missing parent directories.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace pairedval
