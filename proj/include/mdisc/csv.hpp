#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

namespace mdisc {

using CsvCell = std::variant<std::string, double, std::int64_t, std::uint64_t, bool>;

/// 17 significant digits; "inf", "-inf", "nan" for non-finite values.
std::string format_double(double v);
std::string format_cell(const CsvCell& cell);

/// One header row, then data rows in insertion order.
class CsvTable {
 public:
  CsvTable() = default;
  explicit CsvTable(std::vector<std::string> header);

  const std::vector<std::string>& header() const { return header_; }
  const std::vector<std::vector<std::string>>& rows() const { return rows_; }

  /// Throws DimensionError when the row width differs from the header.
  void add_row(const std::vector<CsvCell>& cells);
  /// Appends all rows of another table with the same header.
  void append(const CsvTable& other);

  /// Column index by name; throws ValidationError if absent.
  std::size_t column(const std::string& name) const;
  const std::string& at(std::size_t row, const std::string& name) const;
  double number(std::size_t row, const std::string& name) const;

  void write(std::ostream& out) const;
  void save(const std::filesystem::path& path) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

/// Minimal RFC 4180 reader (quoted fields, doubled quotes).
CsvTable parse_csv(std::istream& in);
CsvTable load_csv(const std::filesystem::path& path);

}  // namespace mdisc
