// table.cpp

#include "iongrad/table.hpp"

#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace iongrad::cli {

void ResultTable::add_row(std::vector<double> row) {
    if (row.size() != columns.size())
        throw std::invalid_argument("ResultTable: row width mismatch");
    rows.push_back(std::move(row));
}

std::string format_number(double v) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc{}) throw std::runtime_error("format_number failed");
    return {buf, p};
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string ResultTable::to_csv() const {
    if (units.size() != columns.size())
        throw std::invalid_argument("ResultTable: units/columns mismatch");
    std::ostringstream out;
    for (const auto& [k, v] : metadata) out << "# " << k << ": " << v << "\n";
    for (size_t i = 0; i < columns.size(); ++i)
        out << (i ? "," : "") << csv_escape(columns[i]);
    out << "\n#";
    for (size_t i = 0; i < units.size(); ++i)
        out << (i ? "," : " ") << csv_escape(units[i]);
    out << "\n";
    for (const auto& row : rows) {
        for (size_t i = 0; i < row.size(); ++i) {
            if (i) out << ",";
            if (!std::isnan(row[i])) out << format_number(row[i]);
        }
        out << "\n";
    }
    return out.str();
}

uint64_t fnv1a(const std::string& s) {
    uint64_t h = 14695981039346656037ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

} // namespace iongrad::cli
