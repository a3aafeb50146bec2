#pragma once

#include <string>
#include <string_view>
#include <vector>

// Minimal CSV helpers: RFC-4180 style quoting, just enough for manifests and
// report files.
namespace swcrack::csv {

std::string escape(std::string_view field);
std::string join(const std::vector<std::string>& fields);

/// Splits one line into fields, honoring quotes. Throws ParseError on an
/// unterminated quote.
std::vector<std::string> split_line(const std::string& line);

}  // namespace swcrack::csv
