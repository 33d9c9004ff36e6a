#include "cli/table.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "json.hpp"

namespace noisy_amp::cli {
namespace {

std::string quoted(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string out = "\"";
  for (const char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string to_text(const Cell& cell) {
  if (const auto* x = std::get_if<double>(&cell)) return format_real(*x);
  if (const auto* n = std::get_if<long>(&cell)) return std::to_string(*n);
  return std::get<std::string>(cell);
}

}  // namespace

std::string format_real(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

void write_csv(std::ostream& out, const Table& table, const std::vector<std::pair<std::string, std::string>>& header,
               const std::string& stamp) {
  for (const auto& [key, value] : header) out << "# " << key << " = " << value << '\n';
  out << "# " << stamp << '\n';
  for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i ? "," : "") << quoted(table.columns[i]);
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << quoted(to_text(row[i]));
    out << '\n';
  }
}

void write_json(std::ostream& out, const Table& table) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < row.size(); ++i) {
      const std::string& key = table.columns[i];
      if (const auto* x = std::get_if<double>(&row[i])) {
        if (std::isnan(*x)) {
          obj[key] = nullptr;
        } else if (std::isinf(*x)) {
          obj[key] = *x > 0 ? "inf" : "-inf";
        } else {
          obj[key] = std::strtod(format_real(*x).c_str(), nullptr);
        }
      } else if (const auto* n = std::get_if<long>(&row[i])) {
        obj[key] = *n;
      } else {
        obj[key] = std::get<std::string>(row[i]);
      }
    }
    rows.push_back(std::move(obj));
  }
  out << rows.dump(2) << '\n';
}

}  // namespace noisy_amp::cli
