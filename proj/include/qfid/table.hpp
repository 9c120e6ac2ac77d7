#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "qfid/config.hpp"

namespace qfid {

/// Empty, text, integer, real or boolean. Reals must not be NaN; infinities
/// are written as the token "inf" (or "-inf").
using TableValue = std::variant<std::monostate, std::string, std::int64_t, double, bool>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<TableValue>> rows;

  /// Throws DomainError when the width does not match or a value is NaN.
  void add_row(std::vector<TableValue> row);
};

/// Shortest text that parses back to the same double.
std::string format_double(double value);

/// RFC 4180: header line, CRLF line ends, fields quoted only when needed.
std::string to_csv(const Table& table);

/// Array of objects keyed by column name. Empty cells become null and
/// infinities become the strings "inf" / "-inf".
std::string to_json(const Table& table);

/// Writes `<stem>.csv` and/or `<stem>.json` into `directory`.
void write_table(const Table& table, const std::filesystem::path& directory,
                 const std::string& stem, OutputFormat format);

}  // namespace qfid
