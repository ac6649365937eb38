#ifndef LQTX_CSV_HPP_
#define LQTX_CSV_HPP_

#include <filesystem>
#include <string>
#include <vector>

namespace lqtx::csv {

// Comma-separated table with a header row; LF line endings, no quoting.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(const std::string& name) const;
  double number(std::size_t row, const std::string& name) const;
};

/// 17 significant digits, so parsing the text recovers the exact double.
std::string format_number(double value);
std::string format_number(std::size_t value);

void write(const std::filesystem::path& path, const Table& table);
Table read(const std::filesystem::path& path);

}  // namespace lqtx::csv

#endif  // LQTX_CSV_HPP_
