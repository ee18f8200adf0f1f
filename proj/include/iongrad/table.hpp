// table.hpp — deterministic tabular results and CSV serialization

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace iongrad::cli {

// Numeric table with one unit per column.  NaN cells serialize as empty
// fields (annotated nulls).  Metadata lines ('# key: value') carry the config
// hash and tool version; anything run-dependent (wall time) stays out so that
// identical configs produce byte-identical files.
struct ResultTable {
    std::vector<std::string> columns;
    std::vector<std::string> units;
    std::vector<std::vector<double>> rows;
    std::vector<std::pair<std::string, std::string>> metadata;

    void add_row(std::vector<double> row);
    std::string to_csv() const;
};

// shortest exact decimal formatting; deterministic across runs
std::string format_number(double v);

// RFC-4180 quoting for header/metadata text
std::string csv_escape(const std::string& s);

uint64_t fnv1a(const std::string& s);

} // namespace iongrad::cli
