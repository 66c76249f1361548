#include "fidsus/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

#include "fidsus/error.hpp"

namespace fidsus {

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

std::size_t CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw Error(ErrorKind::ConfigError, "CSV has no column '" + name + "'");
}

void write_csv(std::ostream& out, const CsvTable& table) {
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out << ',';
      out << cells[i];
    }
    out << '\n';
  };
  line(table.header);
  for (const auto& row : table.rows) line(row);
}

std::string to_csv_string(const CsvTable& table) {
  std::ostringstream out;
  write_csv(out, table);
  return out.str();
}

CsvTable read_csv(std::istream& in) {
  auto split = [](const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream s(line);
    while (std::getline(s, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
  };
  CsvTable t;
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorKind::ConfigError, "empty CSV input");
  t.header = split(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto cells = split(line);
    if (cells.size() != t.header.size()) {
      throw Error(ErrorKind::ConfigError, "CSV row has " + std::to_string(cells.size()) + " cells, header has " +
                                              std::to_string(t.header.size()));
    }
    t.rows.push_back(std::move(cells));
  }
  return t;
}

CsvTable read_csv_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ConfigError, "cannot open " + path.string());
  return read_csv(in);
}

void write_file_atomically(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".partial";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::ConfigError, "cannot write " + tmp.string());
    out << content;
    if (!out) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw Error(ErrorKind::ConfigError, "short write to " + tmp.string());
    }
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace fidsus
