#include "qfid/table.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <json.hpp>

#include "qfid/errors.hpp"

namespace qfid {

namespace {

std::string csv_field(const TableValue& v) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return {};
        } else if constexpr (std::is_same_v<T, std::string>) {
          if (x.find_first_of(",\"\r\n") == std::string::npos) return x;
          std::string quoted = "\"";
          for (char ch : x) {
            if (ch == '"') quoted += '"';
            quoted += ch;
          }
          return quoted + '"';
        } else if constexpr (std::is_same_v<T, bool>) {
          return x ? "true" : "false";
        } else if constexpr (std::is_same_v<T, double>) {
          return format_double(x);
        } else {
          return std::to_string(x);
        }
      },
      v);
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << content;
  if (!out) throw Error("failed writing " + path.string());
}

}  // namespace

void Table::add_row(std::vector<TableValue> row) {
  if (row.size() != columns.size()) {
    throw DomainError("row has " + std::to_string(row.size()) + " fields, table has " +
                      std::to_string(columns.size()) + " columns");
  }
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (const auto* d = std::get_if<double>(&row[i]); d && std::isnan(*d)) {
      throw DomainError("NaN in column '" + columns[i] + "'");
    }
  }
  rows.push_back(std::move(row));
}

std::string format_double(double value) {
  if (std::isnan(value)) throw DomainError("cannot format NaN");
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  std::array<char, 32> buffer{};
  const auto [end, ec] = std::to_chars(buffer.data(), buffer.data() + buffer.size(), value);
  return std::string(buffer.data(), end);
}

std::string to_csv(const Table& table) {
  std::string out;
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    if (i) out += ',';
    out += csv_field(table.columns[i]);
  }
  out += "\r\n";
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += csv_field(row[i]);
    }
    out += "\r\n";
  }
  return out;
}

std::string to_json(const Table& table) {
  auto array = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    nlohmann::ordered_json object = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < row.size(); ++i) {
      auto& slot = object[table.columns[i]];
      std::visit(
          [&slot](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, std::monostate>) {
              slot = nullptr;
            } else if constexpr (std::is_same_v<T, double>) {
              if (std::isinf(x)) {
                slot = format_double(x);
              } else {
                slot = x;
              }
            } else {
              slot = x;
            }
          },
          row[i]);
    }
    array.push_back(std::move(object));
  }
  return array.dump(2) + "\n";
}

void write_table(const Table& table, const std::filesystem::path& directory,
                 const std::string& stem, OutputFormat format) {
  if (format != OutputFormat::Json) write_file(directory / (stem + ".csv"), to_csv(table));
  if (format != OutputFormat::Csv) write_file(directory / (stem + ".json"), to_json(table));
}

}  // namespace qfid
