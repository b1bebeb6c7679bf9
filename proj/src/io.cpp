#include "asep/io.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace asep {

std::string fmt17(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

void write_text_file(const std::filesystem::path& path, const std::string& contents) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    out << contents;
}

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
    std::string text;
    for (size_t i = 0; i < header.size(); ++i) {
        text += header[i];
        text += (i + 1 < header.size()) ? ',' : '\n';
    }
    for (const auto& row : rows) {
        for (size_t i = 0; i < row.size(); ++i) {
            text += row[i];
            text += (i + 1 < row.size()) ? ',' : '\n';
        }
    }
    write_text_file(path, text);
}

}  // namespace asep
