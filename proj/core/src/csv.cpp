#include "optstop/csv.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace optstop {

CsvBuilder::CsvBuilder(const std::string& command, std::uint64_t config_hash,
                       std::uint64_t seed, const std::vector<std::string>& columns)
    : n_columns_(columns.size()) {
  char head[96];
  std::snprintf(head, sizeof(head), "# optstop %s config_hash=%016llx seed=%llu\n",
                command.c_str(), static_cast<unsigned long long>(config_hash),
                static_cast<unsigned long long>(seed));
  text_ = head;
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (i) text_ += ',';
    text_ += columns[i];
  }
  text_ += '\n';
}

void CsvBuilder::row(const std::vector<std::string>& cells) {
  if (cells.size() != n_columns_)
    throw std::invalid_argument("CsvBuilder: row width does not match the header");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) text_ += ',';
    text_ += cells[i];
  }
  text_ += '\n';
}

std::string CsvBuilder::num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string CsvBuilder::count(std::uint64_t n) {
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%llu", static_cast<unsigned long long>(n));
  return buf;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace optstop
