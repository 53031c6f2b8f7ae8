#ifndef AERLOC_TEXT_IO_HPP_
#define AERLOC_TEXT_IO_HPP_

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace aerloc {

using KeyValues = std::map<std::string, std::string>;

/// Shortest decimal text that parses back to the identical double.
std::string format_double(double value);
double parse_double(std::string_view text);
unsigned long long parse_u64(std::string_view text);

/// `key=value` per line; blank lines and lines starting with '#' are skipped.
KeyValues read_key_values(const std::filesystem::path& path);
void write_key_values(const std::filesystem::path& path,
                      const std::vector<std::pair<std::string, std::string>>& kv);

double require_number(const KeyValues& kv, const std::string& key);
std::string require_string(const KeyValues& kv, const std::string& key);

/// Minimal CSV table: '#'-prefixed comment lines, one header row, no quoting.
struct CsvTable {
  std::vector<std::string> comments;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(std::string_view name) const;
};

CsvTable read_csv(const std::filesystem::path& path);
std::vector<std::string> split_csv_line(std::string_view line);

}  // namespace aerloc

#endif  // AERLOC_TEXT_IO_HPP_
