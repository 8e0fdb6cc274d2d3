#pragma once

#include <cmath>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fickit/error.hpp"
#include "fickit/format.hpp"

namespace fickit::cli {

/// Builds a CSV file in memory: `# key = value` metadata lines, a header
/// row, then data rows. Written to disk in one go by `save`.
class CsvDocument {
 public:
  void meta(const std::string& key, const std::string& value) { text_ += "# " + key + " = " + value + "\n"; }

  void header(std::initializer_list<const char*> columns) {
    columns_ = columns.size();
    std::string line;
    for (const char* c : columns) line += (line.empty() ? "" : ",") + std::string(c);
    text_ += line + "\n";
  }

  void row(const std::vector<std::string>& cells) {
    if (cells.size() != columns_) throw Error("CSV row has " + std::to_string(cells.size()) + " cells, expected " +
                                              std::to_string(columns_));
    std::string line;
    for (std::size_t i = 0; i < cells.size(); ++i) line += (i ? "," : "") + cells[i];
    text_ += line + "\n";
  }

  const std::string& text() const noexcept { return text_; }

  void save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw InvalidArgument("cannot write '" + path.string() + "'");
    out << text_;
    if (!out) throw InvalidArgument("failed writing '" + path.string() + "'");
  }

 private:
  std::string text_;
  std::size_t columns_ = 0;
};

inline std::string cell(double v) { return std::isfinite(v) ? format_double(v) : std::string("NA"); }
inline std::string cell(const std::optional<double>& v) { return v ? cell(*v) : std::string("NA"); }
inline std::string cell(std::size_t v) { return std::to_string(v); }
inline std::string cell(int v) { return std::to_string(v); }
inline std::string cell(bool v) { return v ? "true" : "false"; }

/// Free text made safe for an unquoted CSV cell.
inline std::string text_cell(std::string s) {
  for (char& c : s)
    if (c == ',' || c == '\n' || c == '\r' || c == '"') c = ';';
  return s;
}

}  // namespace fickit::cli
