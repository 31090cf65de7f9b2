/*
 * SPDX-FileCopyrightText: 2026 spinmarket contributors
 * SPDX-License-Identifier: MIT
 */
#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "spinmarket/market.hpp"

namespace spinmarket {

/// RAII stdio file with error checking; all CSV output goes through this so
/// formatting stays identical everywhere (%.17g doubles, '.' decimal point).
class CsvFile {
public:
    explicit CsvFile(const std::filesystem::path& path);
    ~CsvFile();
    CsvFile(const CsvFile&) = delete;
    CsvFile& operator=(const CsvFile&) = delete;

    void line(const std::string& text);
    void raw(const char* fmt, ...) __attribute__((format(printf, 2, 3)));
    void close();

private:
    std::filesystem::path path_;
    std::FILE* file_ = nullptr;
};

/// Lossless round-trip formatting for doubles.
std::string format_double(double value);

/// Compact %g formatting, used for values embedded in file names.
std::string format_compact(double value);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

/// Numeric CSV with a mandatory header row. Parse failures report the
/// 1-based line number.
CsvTable read_numeric_csv(const std::filesystem::path& path);

/// Return-series ingestion with a header sniff: accepts `t,r`, `t,return`,
/// or `t,price` (case-insensitive). Prices are converted to log differences.
ReturnSeries load_series_csv(const std::filesystem::path& path);

}  // namespace spinmarket
