#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace alive::experiments {

/// Round-trip decimal text ("%.17g"), '.' separator regardless of locale.
std::string format_number(double x);
/// Empty field for a missing value (e.g. a collapsed filter).
std::string format_number(std::optional<double> x);
std::string format_number(std::uint64_t x);

/// CSV file with a leading "# key=value ..." metadata line, a header row and
/// data rows. The metadata always ends with rows=<data row count>.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

  void add_meta(std::string key, std::string value) { meta_.emplace_back(std::move(key), std::move(value)); }
  void add_row(std::vector<std::string> row);

  std::size_t rows() const { return rows_.size(); }
  const std::vector<std::string>& header() const { return header_; }
  const std::vector<std::vector<std::string>>& data() const { return rows_; }

  std::string str() const;
  void write(const std::filesystem::path& path) const;

 private:
  std::vector<std::pair<std::string, std::string>> meta_;
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

/// Parsed form of a file written by CsvTable.
struct CsvContents {
  std::vector<std::pair<std::string, std::string>> meta;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::optional<std::string> meta_value(const std::string& key) const;
};

CsvContents read_csv(const std::filesystem::path& path);

}  // namespace alive::experiments
