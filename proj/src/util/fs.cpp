#include "garden/util/fs.hpp"

#include <fstream>
#include <sstream>

#include "garden/error.hpp"

namespace garden::fs {

std::string read_file(const stdfs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::MissingFile, path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const stdfs::path& path, std::string_view contents) {
    if (path.has_parent_path()) stdfs::create_directories(path.parent_path());
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) fail(ErrorCode::IoError, "cannot write " + tmp.string());
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        if (!out) fail(ErrorCode::IoError, "short write to " + tmp.string());
    }
    stdfs::rename(tmp, path);
}

void append_line(const stdfs::path& path, std::string_view line) {
    if (path.has_parent_path()) stdfs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::app);
    if (!out) fail(ErrorCode::IoError, "cannot append to " + path.string());
    out.write(line.data(), static_cast<std::streamsize>(line.size()));
    out.put('\n');
    out.flush();
    if (!out) fail(ErrorCode::IoError, "append failed for " + path.string());
}

}  // namespace garden::fs
