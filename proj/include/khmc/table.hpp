#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace khmc {

/// Rectangular table of doubles/integers/strings with a deterministic row
/// order; the interchange format of every CLI command.  CSV output is
/// RFC 4180 (CRLF, quoting) with floats at 17 significant digits, so
/// doubles round-trip exactly.
class ResultTable {
 public:
  using Cell = std::variant<double, long long, std::string>;

  explicit ResultTable(std::vector<std::string> columns);

  void add_row(std::vector<Cell> row);

  const std::vector<std::string>& columns() const { return columns_; }
  const std::vector<std::vector<Cell>>& rows() const { return rows_; }
  std::size_t n_rows() const { return rows_.size(); }

  /// Serialized CSV, header first.
  std::string to_csv() const;

  /// Writes to a temporary file in the same directory, then renames, so a
  /// failed run never leaves a partial file and re-running never appends.
  void write_csv(const std::string& path) const;

  /// All cells are read back as strings.
  static ResultTable read_csv(const std::string& path);

  static std::string format_cell(const Cell& cell);

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<Cell>> rows_;
};

/// Atomic write-temp-then-rename for any text payload.
void atomic_write(const std::string& path, const std::string& contents);

}  // namespace khmc
