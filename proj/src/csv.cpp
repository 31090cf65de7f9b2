/*
 * SPDX-FileCopyrightText: 2026 spinmarket contributors
 * SPDX-License-Identifier: MIT
 */
#include "spinmarket/csv.hpp"

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace spinmarket {

CsvFile::CsvFile(const std::filesystem::path& path) : path_(path) {
    file_ = std::fopen(path.string().c_str(), "wb");
    if (!file_)
        throw std::runtime_error("cannot open for writing: " + path.string());
}

CsvFile::~CsvFile() {
    if (file_) std::fclose(file_);
}

void CsvFile::line(const std::string& text) {
    if (std::fputs(text.c_str(), file_) == EOF || std::fputc('\n', file_) == EOF)
        throw std::runtime_error("write failed: " + path_.string());
}

void CsvFile::raw(const char* fmt, ...) {
    std::va_list args;
    va_start(args, fmt);
    const int rc = std::vfprintf(file_, fmt, args);
    va_end(args);
    if (rc < 0) throw std::runtime_error("write failed: " + path_.string());
}

void CsvFile::close() {
    if (!file_) return;
    const int rc = std::fclose(file_);
    file_ = nullptr;
    if (rc != 0) throw std::runtime_error("close failed: " + path_.string());
}

std::string format_double(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

std::string format_compact(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%g", value);
    return buf;
}

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return {};
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) fields.push_back(trim(field));
    return fields;
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

[[noreturn]] void parse_error(const std::filesystem::path& path, std::size_t line_no,
                              const std::string& what) {
    throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                             ": " + what);
}

}  // namespace

CsvTable read_numeric_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path.string());
    CsvTable table;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string stripped = trim(line);
        if (stripped.empty()) continue;
        if (table.header.empty()) {
            table.header = split_fields(stripped);
            if (table.header.empty())
                parse_error(path, line_no, "empty header row");
            continue;
        }
        const auto fields = split_fields(stripped);
        if (fields.size() != table.header.size())
            parse_error(path, line_no, "expected " +
                                           std::to_string(table.header.size()) +
                                           " fields, got " +
                                           std::to_string(fields.size()));
        std::vector<double> row;
        row.reserve(fields.size());
        for (const auto& f : fields) {
            try {
                std::size_t used = 0;
                row.push_back(std::stod(f, &used));
                if (used != f.size()) throw std::invalid_argument(f);
            } catch (const std::exception&) {
                parse_error(path, line_no, "not a number: '" + f + "'");
            }
        }
        table.rows.push_back(std::move(row));
    }
    if (table.header.empty())
        throw std::runtime_error(path.string() + ": empty file");
    return table;
}

ReturnSeries load_series_csv(const std::filesystem::path& path) {
    const CsvTable table = read_numeric_csv(path);
    if (table.header.size() != 2)
        throw std::runtime_error(path.string() +
                                 ": expected two columns (t,r | t,return | t,price)");
    const std::string kind = lower(table.header[1]);
    const bool is_price = kind == "price";
    if (!is_price && kind != "r" && kind != "return")
        throw std::runtime_error(path.string() + ": unknown value column '" +
                                 table.header[1] + "'");
    if (table.rows.empty())
        throw std::runtime_error(path.string() + ": no data rows");

    ReturnSeries rs;
    rs.tau = 1;
    if (is_price) {
        for (std::size_t i = 0; i < table.rows.size(); ++i)
            if (!(table.rows[i][1] > 0.0))
                throw std::runtime_error(path.string() + ":" +
                                         std::to_string(i + 2) +
                                         ": price must be positive");
        for (std::size_t i = 1; i < table.rows.size(); ++i) {
            rs.t.push_back(static_cast<std::int64_t>(std::llround(table.rows[i][0])));
            rs.r.push_back(std::log(table.rows[i][1]) -
                           std::log(table.rows[i - 1][1]));
        }
    } else {
        for (const auto& row : table.rows) {
            rs.t.push_back(static_cast<std::int64_t>(std::llround(row[0])));
            rs.r.push_back(row[1]);
        }
    }
    if (rs.r.empty())
        throw std::runtime_error(path.string() + ": not enough rows for returns");
    return rs;
}

}  // namespace spinmarket
