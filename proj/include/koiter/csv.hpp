#pragma once

#include <cstdio>
#include <string>
#include <vector>

namespace koiter {

// 17 significant digits, '.' decimal separator regardless of locale.
inline std::string format_number(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    std::string s(buf);
    for (char& c : s)
        if (c == ',') c = '.';
    return s;
}

inline std::string format_bool(bool b) { return b ? "true" : "false"; }

class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

    void add_row(std::vector<std::string> row) { rows_.push_back(std::move(row)); }
    std::size_t size() const { return rows_.size(); }

    std::string str() const {
        std::string out = "# schema=1\n";
        out += join(columns_);
        for (const auto& r : rows_) out += join(r);
        return out;
    }

private:
    static std::string join(const std::vector<std::string>& cells) {
        std::string line;
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) line += ',';
            line += cells[i];
        }
        return line + '\n';
    }

    std::vector<std::string> columns_;
    std::vector<std::vector<std::string>> rows_;
};

} // namespace koiter
