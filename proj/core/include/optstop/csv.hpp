#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace optstop {

// Line-oriented CSV with a leading comment line naming the command, the
// config hash and the seed. Doubles are rendered with %.17g so identical runs
// produce identical bytes.
class CsvBuilder {
 public:
  CsvBuilder(const std::string& command, std::uint64_t config_hash, std::uint64_t seed,
             const std::vector<std::string>& columns);

  void row(const std::vector<std::string>& cells);
  static std::string num(double x);
  static std::string count(std::uint64_t n);

  const std::string& str() const { return text_; }

 private:
  std::string text_;
  std::size_t n_columns_;
};

void write_text_file(const std::string& path, const std::string& content);

}  // namespace optstop
