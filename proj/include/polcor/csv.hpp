#pragma once

#include <string>
#include <vector>

namespace polcor {

/// Rectangular numeric table with named columns; the interchange format
/// between the library and the command line tool.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    /// Throws std::domain_error if any row length differs from the header.
    void validate() const;
};

/// Renders the table as CSV: one header row, then one row per entry, values
/// printed with %.17g so a round trip through parse_csv is bitwise exact.
/// The output ends with a newline.
[[nodiscard]] std::string to_csv(const Table& table);

/// Renders the table as a JSON object {"columns": [...], "rows": [[...]]}.
[[nodiscard]] std::string to_json(const Table& table);

/// Parses CSV produced by to_csv (header row plus numeric rows).  Throws
/// std::runtime_error on ragged rows or unparsable numbers.
[[nodiscard]] Table parse_csv(const std::string& text);

/// Writes text to path, creating or truncating the file.  Throws
/// std::runtime_error when the file cannot be opened or written.
void write_text_file(const std::string& path, const std::string& text);

/// Reads a whole text file.  Throws std::runtime_error when the file cannot
/// be opened.
[[nodiscard]] std::string read_text_file(const std::string& path);

}  // namespace polcor
