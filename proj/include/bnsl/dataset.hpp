#pragma once

#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "bnsl/errors.hpp"

namespace bnsl {

/// N rows of 0-based state indices over n discrete variables.
struct Dataset {
    std::vector<std::string> variable_names;
    std::vector<int> num_states;  // r_i per column
    std::vector<int> cells;       // row-major, num_rows() x num_vars()

    int num_vars() const { return static_cast<int>(num_states.size()); }
    std::int64_t num_rows() const {
        return num_states.empty() ? 0 : static_cast<std::int64_t>(cells.size()) / num_vars();
    }
    int at(std::int64_t row, int col) const { return cells[row * num_vars() + col]; }

    void append_row(const std::vector<int>& row) {
        cells.insert(cells.end(), row.begin(), row.end());
    }

    /// Every cell of column i must lie in [0, r_i).
    void validate() const {
        if (variable_names.size() != num_states.size())
            throw ConfigError("dataset: name/state-count length mismatch");
        for (int i = 0; i < num_vars(); ++i)
            if (num_states[i] < 2) throw ConfigError("dataset: column with fewer than 2 states");
        const std::int64_t rows = num_rows();
        for (std::int64_t r = 0; r < rows; ++r)
            for (int c = 0; c < num_vars(); ++c)
                if (at(r, c) < 0 || at(r, c) >= num_states[c])
                    throw ConfigError("dataset: cell out of range at row " + std::to_string(r));
    }
};

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) {
        while (!field.empty() && (field.back() == '\r' || field.back() == ' ')) field.pop_back();
        std::size_t b = 0;
        while (b < field.size() && field[b] == ' ') ++b;
        out.push_back(field.substr(b));
    }
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

}  // namespace detail

/// CSV reader: first row = variable names, cells = 0-based integers or state
/// names. Name cells need `state_names` (one list per column, index = state).
/// Without it, r_i is inferred as max(cell)+1 unless `num_states` is given.
inline Dataset load_dataset_csv(std::istream& in,
                                const std::vector<std::vector<std::string>>* state_names = nullptr,
                                const std::vector<int>* num_states = nullptr) {
    std::string line;
    if (!std::getline(in, line)) throw IoError("dataset CSV: empty input");
    Dataset d;
    d.variable_names = detail::split_csv_line(line);
    const int n = static_cast<int>(d.variable_names.size());
    if (n == 0) throw IoError("dataset CSV: empty header");
    if (state_names && static_cast<int>(state_names->size()) != n)
        throw IoError("dataset CSV: column count does not match state-name table");

    std::vector<int> maxima(n, 1);
    std::int64_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        auto fields = detail::split_csv_line(line);
        if (static_cast<int>(fields.size()) != n)
            throw IoError("dataset CSV: wrong field count on line " + std::to_string(lineno));
        for (int c = 0; c < n; ++c) {
            const std::string& f = fields[c];
            int value = -1;
            try {
                std::size_t pos = 0;
                value = std::stoi(f, &pos);
                if (pos != f.size()) value = -1;
            } catch (...) {
                value = -1;
            }
            if (value < 0) {
                if (!state_names)
                    throw IoError("dataset CSV: non-integer cell '" + f + "' on line " +
                                  std::to_string(lineno) + " and no state names available");
                const auto& names = (*state_names)[c];
                for (std::size_t s = 0; s < names.size(); ++s)
                    if (names[s] == f) value = static_cast<int>(s);
                if (value < 0)
                    throw IoError("dataset CSV: unknown state '" + f + "' on line " +
                                  std::to_string(lineno));
            }
            maxima[c] = std::max(maxima[c], value + 1);
            d.cells.push_back(value);
        }
    }

    if (num_states)
        d.num_states = *num_states;
    else if (state_names) {
        d.num_states.resize(n);
        for (int c = 0; c < n; ++c) d.num_states[c] = static_cast<int>((*state_names)[c].size());
    } else {
        for (int c = 0; c < n; ++c) maxima[c] = std::max(maxima[c], 2);
        d.num_states = maxima;
    }
    d.validate();
    return d;
}

inline Dataset load_dataset_csv_file(const std::string& path,
                                     const std::vector<std::vector<std::string>>* state_names = nullptr,
                                     const std::vector<int>* num_states = nullptr) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open dataset file: " + path);
    return load_dataset_csv(in, state_names, num_states);
}

inline void save_dataset_csv(std::ostream& out, const Dataset& d) {
    for (int c = 0; c < d.num_vars(); ++c) out << (c ? "," : "") << d.variable_names[c];
    out << "\n";
    const std::int64_t rows = d.num_rows();
    for (std::int64_t r = 0; r < rows; ++r) {
        for (int c = 0; c < d.num_vars(); ++c) out << (c ? "," : "") << d.at(r, c);
        out << "\n";
    }
}

inline void save_dataset_csv_file(const std::string& path, const Dataset& d) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write dataset file: " + path);
    save_dataset_csv(out, d);
}

}  // namespace bnsl
