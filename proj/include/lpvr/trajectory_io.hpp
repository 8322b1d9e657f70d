#pragma once

#include <charconv>
#include <cstddef>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "lpvr/error.hpp"
#include "lpvr/model.hpp"
#include "lpvr/simulate.hpp"

namespace lpvr {

// Trajectory files: comma-separated, one time step per row, a header row
// naming the columns.

struct Table {
    std::vector<std::string> header;
    Matrix values; // one row per time step
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
        return "";
    }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        out.push_back(trim(cell));
    }
    if (!line.empty() && line.back() == ',') {
        out.emplace_back();
    }
    return out;
}

inline std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

} // namespace detail

inline Table parse_table(const std::string& text, const std::string& source = "table") {
    std::stringstream in(text);
    std::string line;
    Table t;
    bool have_header = false;
    std::vector<std::vector<double>> rows;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::trim(line).empty()) {
            continue;
        }
        auto cells = detail::split_csv(line);
        if (!have_header) {
            t.header = cells;
            have_header = true;
            continue;
        }
        if (cells.size() != t.header.size()) {
            throw DimensionError(source + ": line " + std::to_string(line_no) + " has " + std::to_string(cells.size()) +
                                 " columns, header has " + std::to_string(t.header.size()));
        }
        std::vector<double> row;
        for (std::size_t c = 0; c < cells.size(); ++c) {
            double v = 0.0;
            const auto& s = cells[c];
            const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
            if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
                throw ParseError(source + ": line " + std::to_string(line_no) + ", column " + std::to_string(c + 1) +
                                 ": '" + s + "' is not a number");
            }
            row.push_back(v);
        }
        rows.push_back(std::move(row));
    }
    if (!have_header) {
        throw ParseError(source + ": missing header row");
    }
    t.values = Matrix(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(t.header.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < rows[i].size(); ++j) {
            t.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
        }
    }
    return t;
}

inline std::string format_table(const Table& t) {
    std::string out;
    for (std::size_t c = 0; c < t.header.size(); ++c) {
        out += (c > 0 ? "," : "") + t.header[c];
    }
    out += "\n";
    for (Eigen::Index i = 0; i < t.values.rows(); ++i) {
        for (Eigen::Index j = 0; j < t.values.cols(); ++j) {
            out += (j > 0 ? "," : "") + detail::format_double(t.values(i, j));
        }
        out += "\n";
    }
    return out;
}

inline Table load_table(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot open file '" + path + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_table(ss.str(), path);
}

inline void save_table(const std::string& path, const Table& t) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error("cannot write file '" + path + "'");
    }
    out << format_table(t);
}

inline SignalTrajectory table_to_signal(const Table& t) { return SignalTrajectory::from_rows(t.values); }

inline SchedulingTrajectory table_to_scheduling(const Table& t) {
    SchedulingTrajectory s;
    for (Eigen::Index i = 0; i < t.values.rows(); ++i) {
        s.points.push_back(t.values.row(i).transpose());
    }
    return s;
}

inline Table signal_to_table(const SignalTrajectory& s, const std::string& prefix) {
    Table t;
    for (std::size_t c = 0; c < s.dimension; ++c) {
        t.header.push_back(prefix + std::to_string(c + 1));
    }
    t.values = s.to_rows();
    return t;
}

} // namespace lpvr
