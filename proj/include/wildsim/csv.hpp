#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "wildsim/errors.hpp"
#include "wildsim/market.hpp"
#include "wildsim/matrix.hpp"
#include "wildsim/recurrence.hpp"

namespace wildsim {

namespace detail {

// Full round-trip precision, locale-independent. snprintf with "%.17g"
// always emits '.' as the decimal separator under the "C" locale that
// we never switch away from.
inline std::string fmt_full(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

inline void open_or_throw(std::ofstream& out, const std::string& path) {
    out.open(path, std::ios::binary);  // binary: LF endings everywhere
    if (!out) throw config_error("cannot open '" + path + "' for writing");
}

}  // namespace detail

inline void write_series_csv(const SeriesSample& s, const std::string& path) {
    std::ofstream out;
    detail::open_or_throw(out, path);
    out << "t,r\n";
    for (std::size_t t = 0; t < s.values.size(); ++t)
        out << t << ',' << detail::fmt_full(s.values[t]) << '\n';
    if (!out) throw config_error("write failed for '" + path + "'");
}

inline void write_market_csv(const MarketPath& m, const std::string& path) {
    std::ofstream out;
    detail::open_or_throw(out, path);
    out << "t,price,return,excess_demand,traders,liquidity,volume,impulse\n";
    for (std::size_t t = 0; t < m.ret.size(); ++t) {
        out << t << ',' << detail::fmt_full(m.price[t]) << ','
            << detail::fmt_full(m.ret[t]) << ','
            << detail::fmt_full(m.excess_demand[t]) << ','
            << detail::fmt_full(m.order_count[t]) << ','
            << detail::fmt_full(m.liquidity[t]) << ','
            << detail::fmt_full(m.volume[t]) << ','
            << detail::fmt_full(m.impulse[t]) << '\n';
    }
    if (!out) throw config_error("write failed for '" + path + "'");
}

// One column per component plus the cross-sectional average.
inline void write_vector_csv(const VectorPath& p, const std::string& path) {
    std::ofstream out;
    detail::open_or_throw(out, path);
    const std::size_t n = p.components.size();
    out << 't';
    for (std::size_t i = 0; i < n; ++i) out << ",x" << i;
    out << ",avg\n";
    const std::size_t len = p.average.size();
    for (std::size_t t = 0; t < len; ++t) {
        out << t;
        for (std::size_t i = 0; i < n; ++i)
            out << ',' << detail::fmt_full(p.components[i][t]);
        out << ',' << detail::fmt_full(p.average[t]) << '\n';
    }
    if (!out) throw config_error("write failed for '" + path + "'");
}

// Deterministic bubble / fixed-point paths share the plain series layout.
inline void write_values_csv(const std::vector<double>& values,
                             const std::string& column,
                             const std::string& path) {
    std::ofstream out;
    detail::open_or_throw(out, path);
    out << "t," << column << '\n';
    for (std::size_t t = 0; t < values.size(); ++t)
        out << t << ',' << detail::fmt_full(values[t]) << '\n';
    if (!out) throw config_error("write failed for '" + path + "'");
}

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            cells.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    cells.push_back(cur);
    return cells;
}

inline double parse_cell(const std::string& cell, std::size_t line_no,
                         const std::string& path) {
    try {
        std::size_t pos = 0;
        double v = std::stod(cell, &pos);
        while (pos < cell.size() &&
               (cell[pos] == ' ' || cell[pos] == '\t'))
            ++pos;
        if (pos != cell.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw config_error(path + ":" + std::to_string(line_no) +
                           ": not a number: '" + cell + "'");
    }
}

}  // namespace detail

// Reads one named column from a headered CSV file.
inline std::vector<double> read_csv_column(const std::string& path,
                                           const std::string& column) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw config_error("cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line))
        throw config_error(path + ": empty file");
    auto header = detail::split_csv_line(line);
    std::size_t col = header.size();
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == column) col = i;
    if (col == header.size()) {
        std::string names;
        for (std::size_t i = 0; i < header.size(); ++i)
            names += (i ? ", " : "") + header[i];
        throw config_error(path + ": no column '" + column +
                           "' (have: " + names + ")");
    }
    std::vector<double> values;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        auto cells = detail::split_csv_line(line);
        if (cells.size() != header.size())
            throw config_error(path + ":" + std::to_string(line_no) +
                               ": expected " + std::to_string(header.size()) +
                               " cells, got " + std::to_string(cells.size()));
        values.push_back(detail::parse_cell(cells[col], line_no, path));
    }
    if (values.empty())
        throw config_error(path + ": column '" + column + "' has no rows");
    return values;
}

// Reads a headerless square numeric grid (weight-matrix input).
inline WeightMatrix read_matrix_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw config_error("cannot open '" + path + "'");
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        auto cells = detail::split_csv_line(line);
        std::vector<double> row;
        row.reserve(cells.size());
        for (const auto& c : cells)
            row.push_back(detail::parse_cell(c, line_no, path));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw config_error(path + ": empty matrix");
    for (const auto& r : rows)
        if (r.size() != rows.size())
            throw config_error(path + ": matrix must be square (" +
                               std::to_string(rows.size()) + " rows, row with " +
                               std::to_string(r.size()) + " cells)");
    return WeightMatrix::from_rows(rows);
}

}  // namespace wildsim
