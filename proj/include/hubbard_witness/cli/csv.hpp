#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace hw::cli {

/// A CSV cell is either a number or free text (status columns).
using CsvCell = std::variant<double, std::string>;

/// `# key = value` preamble, one header row, data rows. Numbers are
/// written in shortest round-trip form so parse(emit(x)) == x bitwise.
struct CsvTable {
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<std::string> columns;
  std::vector<std::vector<CsvCell>> rows;

  std::size_t column(const std::string& name) const;
  double number(std::size_t row, const std::string& name) const;
};

void write_csv(std::ostream& os, const CsvTable& table);
void write_csv(const std::filesystem::path& path, const CsvTable& table);

/// Cells that parse fully as numbers become doubles ("nan" included);
/// everything else stays text.
CsvTable read_csv(std::istream& is);
CsvTable read_csv(const std::filesystem::path& path);

}  // namespace hw::cli
