#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace garden::fs {

namespace stdfs = std::filesystem;

std::string read_file(const stdfs::path& path);
// Writes via a temporary sibling and rename, creating parent directories.
void write_file(const stdfs::path& path, std::string_view contents);
void append_line(const stdfs::path& path, std::string_view line);

}  // namespace garden::fs
