#include "hubbard_witness/cli/csv.hpp"

#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "hubbard_witness/format.hpp"

namespace hw::cli {

namespace {

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, ',')) {
    const auto b = cell.find_first_not_of(" \t");
    const auto e = cell.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? std::string() : cell.substr(b, e - b + 1));
  }
  return out;
}

std::string cell_text(const CsvCell& c) {
  if (const double* d = std::get_if<double>(&c)) return format_double(*d);
  return std::get<std::string>(c);
}

CsvCell parse_cell(const std::string& text) {
  if (text == "nan") return std::numeric_limits<double>::quiet_NaN();
  try {
    return parse_double(text);
  } catch (const std::invalid_argument&) {
    return text;
  }
}

}  // namespace

std::size_t CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == name) return i;
  }
  throw std::out_of_range("no CSV column named '" + name + "'");
}

double CsvTable::number(std::size_t row, const std::string& name) const {
  const auto& cell = rows.at(row).at(column(name));
  if (const double* d = std::get_if<double>(&cell)) return *d;
  throw std::invalid_argument("CSV cell in column '" + name + "' is not numeric");
}

void write_csv(std::ostream& os, const CsvTable& table) {
  for (const auto& [k, v] : table.metadata) os << "# " << k << " = " << v << '\n';
  for (std::size_t i = 0; i < table.columns.size(); ++i) os << (i ? "," : "") << table.columns[i];
  os << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << cell_text(row[i]);
    os << '\n';
  }
}

void write_csv(const std::filesystem::path& path, const CsvTable& table) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_csv(os, table);
  if (!os) throw std::runtime_error("failed writing " + path.string());
}

CsvTable read_csv(std::istream& is) {
  CsvTable t;
  std::string line;
  bool have_header = false;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      const std::string body = line.substr(1);
      const auto eq = body.find('=');
      auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(' ');
        const auto e = s.find_last_not_of(' ');
        return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
      };
      if (eq == std::string::npos) {
        t.metadata.emplace_back(trim(body), "");
      } else {
        t.metadata.emplace_back(trim(body.substr(0, eq)), trim(body.substr(eq + 1)));
      }
      continue;
    }
    if (!have_header) {
      t.columns = split_row(line);
      have_header = true;
      continue;
    }
    std::vector<CsvCell> row;
    for (const auto& c : split_row(line)) row.push_back(parse_cell(c));
    if (row.size() != t.columns.size()) {
      throw std::runtime_error("CSV row has " + std::to_string(row.size()) + " cells, header has " +
                               std::to_string(t.columns.size()));
    }
    t.rows.push_back(std::move(row));
  }
  if (!have_header) throw std::runtime_error("CSV has no header row");
  return t;
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open " + path.string());
  return read_csv(is);
}

}  // namespace hw::cli
