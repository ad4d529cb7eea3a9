#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace geclust {

std::string read_file(const std::string& path);
/// Creates parent directories as needed.
void write_file(const std::string& path, std::string_view content);

/// Lines without their terminators; a trailing newline does not add an empty line.
std::vector<std::string_view> split_lines(std::string_view text);
std::vector<std::string_view> split(std::string_view text, char sep);
std::string_view trim(std::string_view s);

bool parse_double(std::string_view s, double& out);
/// Shortest representation that parses back to the same double.
std::string format_double(double x);

}  // namespace geclust
