#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace fidsus {

/// Shortest decimal that round-trips to the same double ("nan"/"inf" spelled out).
std::string format_number(double value);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Index of a header column; throws ConfigError if absent.
  std::size_t column(const std::string& name) const;
};

void write_csv(std::ostream& out, const CsvTable& table);
std::string to_csv_string(const CsvTable& table);
CsvTable read_csv(std::istream& in);
CsvTable read_csv_file(const std::filesystem::path& path);

/// Writes via a sibling temporary file and rename, so readers never see a
/// partially written file.
void write_file_atomically(const std::filesystem::path& path, const std::string& content);

}  // namespace fidsus
