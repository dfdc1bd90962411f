#pragma once

// Delimited numeric output shared by every subcommand:
//
//   col_a,col_b,...          header line
//   # key: value             zero or more metadata lines
//   1.2345678901234567,...   rows, %.17g
//
// Booleans are written as 0/1 and undefined values as nan.

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace paultrap::io {

struct Table {
  std::vector<std::string> columns;
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<std::vector<double>> rows;

  void add_row(std::vector<double> row);
  void add_meta(std::string key, std::string value);
  /// Index of `name` in columns; throws std::out_of_range if absent.
  std::size_t column(const std::string& name) const;
  /// First metadata value for `key`, or empty.
  std::string meta(const std::string& key) const;
};

/// Lossless decimal rendering (17 significant digits).
std::string format_number(double v);

void write_table(std::ostream& out, const Table& table, char delimiter = ',');
void write_table_file(const std::string& path, const Table& table, char delimiter = ',');

/// Reads what write_table writes. Throws std::runtime_error on malformed rows.
Table read_table(std::istream& in, char delimiter = ',');
Table read_table_file(const std::string& path, char delimiter = ',');

}  // namespace paultrap::io
