#pragma once

#include <filesystem>
#include <istream>
#include <vector>

namespace alive {

/// Reads one column of strictly positive index levels (optional single header
/// row, '.' decimal separator) and returns log(I_n / I_{n-1}) for n >= 2.
/// Throws ParseError (1-based row) or NonPositiveIndex.
std::vector<double> load_returns_csv(const std::filesystem::path& path);
std::vector<double> parse_returns_csv(std::istream& in);

}  // namespace alive
