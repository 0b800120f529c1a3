#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace herdsig {

std::vector<unsigned char> read_bytes(const std::filesystem::path& path);
std::string read_text(const std::filesystem::path& path);

// Writes to a sibling temporary file and renames it over the target, so a
// reader never observes a partially written file.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);
void write_file_atomic(const std::filesystem::path& path, const std::vector<unsigned char>& content);

// Minimal RFC-4180 field splitting (double quotes, doubled-quote escapes).
std::vector<std::string> split_csv_line(std::string_view line);
std::string csv_escape(std::string_view field);

// Splits text into lines, dropping '\r' and a trailing empty line.
std::vector<std::string> split_lines(std::string_view text);

// printf("%.6g")
std::string format_g6(double value);
// Fixed decimals.
std::string format_fixed(double value, int decimals);

}  // namespace herdsig
