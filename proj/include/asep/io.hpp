#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace asep {

/// 17 significant digits: doubles round-trip exactly, outputs are
/// byte-stable across runs.
std::string fmt17(double x);

void write_text_file(const std::filesystem::path& path, const std::string& contents);

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

}  // namespace asep
