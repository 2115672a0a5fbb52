#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace gridcast {

/// A CSV file read into memory.  Every row has exactly as many cells as
/// the header; cells are raw strings, empty string meaning an empty cell.
struct CsvTable {
    std::string path;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    /// Index of a named column.  Throws InputError naming the file when
    /// the column is absent.
    [[nodiscard]] std::size_t col(const std::string& name) const;

    [[nodiscard]] bool has_col(const std::string& name) const;

    /// 1-based file row of data row i (header is row 1).
    [[nodiscard]] std::size_t file_row(std::size_t i) const { return i + 2; }
};

/// Reads a comma-separated file with a header row.  Cells are not
/// quoted; surrounding whitespace is trimmed and CR line endings are
/// tolerated.  Throws InputError on unreadable files, an empty file, or
/// rows whose cell count differs from the header.
[[nodiscard]] CsvTable read_csv(const std::string& path);

/// Writes a comma-separated file, header first.  Throws InputError when
/// the file cannot be created.
void write_csv(const std::string& path, const std::vector<std::string>& columns,
               const std::vector<std::vector<std::string>>& rows);

/// Shortest decimal form that parses back to the identical double.
/// Rejects non-finite values.
[[nodiscard]] std::string format_double(double v);

/// Strict double parse of a whole cell.  `context` names the file and
/// row in the InputError raised on garbage.
[[nodiscard]] double parse_double(const std::string& cell, const std::string& context);

/// Strict non-negative integer parse of a whole cell.
[[nodiscard]] long long parse_int(const std::string& cell, const std::string& context);

}  // namespace gridcast
