#include "alive/models/returns_csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <string>
#include <string_view>

#include "alive/errors.hpp"

namespace alive {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  s = s.substr(first, last - first + 1);
  if (s.size() >= 3 && s.substr(0, 3) == "\xEF\xBB\xBF") s.remove_prefix(3);  // UTF-8 BOM
  return s;
}

std::optional<double> parse_number(std::string_view s) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

}  // namespace

std::vector<double> parse_returns_csv(std::istream& in) {
  std::vector<double> levels;
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    const auto field = trim(line);
    if (field.empty()) continue;
    const auto value = parse_number(field);
    if (!value) {
      if (row == 1) continue;  // header
      throw ParseError(row, "not a number: '" + std::string(field) + "'");
    }
    if (!(*value > 0.0) || !std::isfinite(*value)) throw NonPositiveIndex(row, *value);
    levels.push_back(*value);
  }
  std::vector<double> returns;
  for (std::size_t n = 1; n < levels.size(); ++n) returns.push_back(std::log(levels[n] / levels[n - 1]));
  return returns;
}

std::vector<double> load_returns_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "cannot open " + path.string());
  return parse_returns_csv(in);
}

}  // namespace alive
