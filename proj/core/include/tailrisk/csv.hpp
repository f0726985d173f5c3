#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace tailrisk::csv {

/// Parsed CSV file: `# key=value` directive lines (before the header),
/// one header row, then data rows tagged with their 1-based file line.
struct Table {
  std::map<std::string, std::string> directives;
  std::vector<std::string> header;
  std::vector<std::pair<std::size_t, std::vector<std::string>>> rows;
};

Table read_file(const std::filesystem::path& path);

/// Splits one CSV line; supports double-quoted cells with "" escapes.
std::vector<std::string> split_line(const std::string& line);

std::string escape(const std::string& cell);

/// Writes via a temporary file in the same directory followed by a rename,
/// so readers never observe a partially written file.
void atomic_write_text(const std::filesystem::path& path, const std::string& content);

}  // namespace tailrisk::csv
