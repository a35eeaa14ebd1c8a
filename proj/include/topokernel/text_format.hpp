#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace topokernel {

// Shortest round-trip-safe rendering: printf "%.17g".
std::string format_double(double value);

// Parses a real number; accepts "a/b" fractions such as "1/3".
// Throws ArgumentError.
double parse_real(std::string_view text);

// Splits on `sep`, trimming ASCII whitespace around each field.
std::vector<std::string> split_fields(std::string_view text, char sep);

// Writes `contents` to `path`, creating parent directories. Throws
// std::runtime_error when the file cannot be written.
void write_text_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace topokernel
