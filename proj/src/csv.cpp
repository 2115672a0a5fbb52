#include "gridcast/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "gridcast/errors.hpp"

namespace gridcast {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && (s[a] == ' ' || s[a] == '\t' || s[a] == '\r')) ++a;
    while (b > a && (s[b - 1] == ' ' || s[b - 1] == '\t' || s[b - 1] == '\r')) --b;
    return s.substr(a, b - a);
}

std::vector<std::string> split_row(const std::string& line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size() || line[i] == ',') {
            cells.push_back(trim(line.substr(start, i - start)));
            start = i + 1;
        }
    }
    return cells;
}

}  // namespace

std::size_t CsvTable::col(const std::string& name) const {
    auto it = std::find(columns.begin(), columns.end(), name);
    if (it == columns.end()) throw InputError(path + ": missing column '" + name + "'");
    return static_cast<std::size_t>(it - columns.begin());
}

bool CsvTable::has_col(const std::string& name) const {
    return std::find(columns.begin(), columns.end(), name) != columns.end();
}

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    CsvTable t;
    t.path = path;
    std::string line;
    if (!std::getline(in, line)) throw InputError(path + ": empty file");
    t.columns = split_row(line);
    std::size_t row_no = 1;
    while (std::getline(in, line)) {
        ++row_no;
        if (trim(line).empty()) continue;
        auto cells = split_row(line);
        if (cells.size() != t.columns.size())
            throw InputError(path + " row " + std::to_string(row_no) + ": expected " +
                             std::to_string(t.columns.size()) + " cells, got " +
                             std::to_string(cells.size()));
        t.rows.push_back(std::move(cells));
    }
    return t;
}

void write_csv(const std::string& path, const std::vector<std::string>& columns,
               const std::vector<std::vector<std::string>>& rows) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot create " + path);
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (i) out << ',';
        out << columns[i];
    }
    out << '\n';
    for (const auto& row : rows) {
        if (row.size() != columns.size())
            throw InternalError("csv row width mismatch while writing " + path);
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << ',';
            out << row[i];
        }
        out << '\n';
    }
    if (!out) throw InputError("write failed for " + path);
}

std::string format_double(double v) {
    if (!std::isfinite(v)) throw InternalError("refusing to format non-finite value");
    char buf[40];
    auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

double parse_double(const std::string& cell, const std::string& context) {
    double v = 0;
    auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (ec != std::errc{} || ptr != cell.data() + cell.size() || !std::isfinite(v))
        throw InputError(context + ": not a number: '" + cell + "'");
    return v;
}

long long parse_int(const std::string& cell, const std::string& context) {
    long long v = 0;
    auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (ec != std::errc{} || ptr != cell.data() + cell.size() || v < 0)
        throw InputError(context + ": not a non-negative integer: '" + cell + "'");
    return v;
}

}  // namespace gridcast
