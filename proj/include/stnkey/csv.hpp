#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace stnkey {

/// Doubles at full round-trip precision (17 significant digits, '.' decimal).
std::string format_double(double v);
std::string format_u64(std::uint64_t v);

/// Minimal CSV table: header row plus string cells. Cells never contain
/// commas or newlines in this project, so no quoting is implemented.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(std::string_view name) const;  // throws if missing
  std::string to_string() const;
  static CsvTable parse(std::string_view text);
};

}  // namespace stnkey
