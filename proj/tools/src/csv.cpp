#include "alive/experiments/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace alive::experiments {

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, sep)) out.push_back(field);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

}  // namespace

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  // snprintf honours LC_NUMERIC; the files always use '.'
  for (char& ch : buf)
    if (ch == ',') ch = '.';
  return buf;
}

std::string format_number(std::optional<double> x) { return x ? format_number(*x) : std::string(); }

std::string format_number(std::uint64_t x) { return std::to_string(x); }

void CsvTable::add_row(std::vector<std::string> row) {
  if (row.size() != header_.size())
    throw std::invalid_argument("CsvTable: row has " + std::to_string(row.size()) + " fields, header has " +
                                std::to_string(header_.size()));
  rows_.push_back(std::move(row));
}

std::string CsvTable::str() const {
  std::string out = "#";
  for (const auto& [k, v] : meta_) out += " " + k + "=" + v;
  out += " rows=" + std::to_string(rows_.size()) + "\n";
  auto join = [&out](const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) out += ',';
      out += fields[i];
    }
    out += '\n';
  };
  join(header_);
  for (const auto& r : rows_) join(r);
  return out;
}

void CsvTable::write(const std::filesystem::path& path) const {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << str();
}

std::optional<std::string> CsvContents::meta_value(const std::string& key) const {
  for (const auto& [k, v] : meta)
    if (k == key) return v;
  return std::nullopt;
}

CsvContents read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  CsvContents c;
  std::string line;
  if (!std::getline(in, line) || line.empty() || line[0] != '#')
    throw std::runtime_error(path.string() + ": missing metadata line");
  for (const auto& token : split(line.substr(1), ' ')) {
    if (token.empty()) continue;
    const auto eq = token.find('=');
    if (eq == std::string::npos) throw std::runtime_error(path.string() + ": bad metadata token " + token);
    c.meta.emplace_back(token.substr(0, eq), token.substr(eq + 1));
  }
  if (!std::getline(in, line)) throw std::runtime_error(path.string() + ": missing header row");
  c.header = split(line, ',');
  while (std::getline(in, line)) c.rows.push_back(split(line, ','));
  return c;
}

}  // namespace alive::experiments
