#pragma once

#include <string>
#include <utility>
#include <vector>

namespace ironic {

// Reads a UTF-8 text file as lines (trailing \r stripped). Throws
// std::runtime_error when the file cannot be opened.
std::vector<std::string> read_lines(const std::string& path);

void write_lines(const std::string& path, const std::vector<std::string>& lines);

// TSV rows, split on '\t' only. Blank lines and lines starting with '#' skipped.
std::vector<std::vector<std::string>> read_tsv(const std::string& path);

std::string trim(const std::string& s);
std::vector<std::string> split_ws(const std::string& s);
std::string to_lower(const std::string& s);
std::string join(const std::vector<std::string>& tokens, const std::string& sep = " ");

}  // namespace ironic
