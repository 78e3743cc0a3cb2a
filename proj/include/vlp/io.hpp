#pragma once

#include <filesystem>
#include <string>

namespace vlp {

// Floats in CSV/JSON artifacts are printed with 9 significant digits,
// '.' decimal separator, locale-independent.
std::string format_g9(double value);

void write_text_file(const std::filesystem::path& path, const std::string& content);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace vlp
