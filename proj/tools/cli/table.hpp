#pragma once

#include <map>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

namespace noisy_amp::cli {

using Cell = std::variant<double, long, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

/// 12 significant digits, "inf"/"-inf"/"nan" for non-finite values.
std::string format_real(double x);

/// Comment block of "# key = value" lines, then `stamp` on its own comment
/// line, the header row and the data rows. Fields are quoted when needed.
void write_csv(std::ostream& out, const Table& table, const std::vector<std::pair<std::string, std::string>>& header,
               const std::string& stamp);

/// Array of row objects. Reals are rounded to 12 significant digits;
/// infinities become the string "inf", NaN becomes null.
void write_json(std::ostream& out, const Table& table);

}  // namespace noisy_amp::cli
