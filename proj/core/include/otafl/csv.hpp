#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace otafl {

/// 12 significant digits, "nan"/"inf" spelled out.
std::string format_double(double value);

/// A CSV document: a "# key = value" reproducibility header, a column line
/// and data rows.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> columns);

  void add_meta(std::string key, std::string value);
  void add_row(std::vector<std::string> row);

  const std::vector<std::string>& columns() const { return columns_; }
  std::size_t row_count() const { return rows_.size(); }
  std::string str() const;

 private:
  std::vector<std::pair<std::string, std::string>> meta_;
  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> rows_;
};

/// Writes to a sibling temp file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace otafl
