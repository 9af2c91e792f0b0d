#pragma once

#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "extgini/errors.hpp"
#include "extgini/estimator.hpp"

namespace extgini {

/// A parsed observation file: one numeric column, or (label, value) columns.
struct DatasetFile {
    std::string path;
    std::vector<double> values;
    std::vector<std::string> labels;  // empty when the file has no label column
    bool had_header = false;

    Sample sample() const { return Sample(values); }
};

namespace detail {

inline std::optional<double> parse_number(const std::string& cell) {
    if (cell.empty()) {
        return std::nullopt;
    }
    const char* begin = cell.c_str();
    char* end = nullptr;
    const double value = std::strtod(begin, &end);
    if (end != begin + cell.size()) {
        return std::nullopt;
    }
    return value;
}

inline std::string strip(const std::string& s) {
    std::size_t first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) {
        return "";
    }
    std::size_t last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

}  // namespace detail

/// Loads a UTF-8 CSV of observations. A first row whose value cell is not
/// numeric is treated as a header; any later non-numeric value cell is a
/// parse error reported with its line number.
inline DatasetFile load_dataset(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw invalid_input("cannot open input file: " + path);
    }
    DatasetFile data;
    data.path = path;

    std::string line;
    std::size_t line_number = 0;
    bool saw_data = false;
    while (std::getline(in, line)) {
        ++line_number;
        const std::string stripped = detail::strip(line);
        if (stripped.empty()) {
            continue;
        }
        std::vector<std::string> cells;
        std::stringstream ss(stripped);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            cells.push_back(detail::strip(cell));
        }
        if (cells.size() > 2) {
            throw invalid_input("line " + std::to_string(line_number) +
                                ": expected one value column or (label, value) columns");
        }
        const bool has_label = cells.size() == 2;
        const std::string& value_cell = cells.back();
        const auto value = detail::parse_number(value_cell);
        if (!value) {
            if (!saw_data && !data.had_header) {
                data.had_header = true;
                continue;
            }
            throw invalid_input("line " + std::to_string(line_number) + ": value cell '" +
                                value_cell + "' is not numeric");
        }
        if (has_label) {
            data.labels.push_back(cells.front());
        }
        data.values.push_back(*value);
        saw_data = true;
    }
    if (data.values.empty()) {
        throw invalid_input("input file has no observations: " + path);
    }
    return data;
}

}  // namespace extgini
