#include "qmarl/metrics.hpp"

#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace qmarl {

std::vector<double> rolling_mean(std::span<const double> series, int window) {
    if (window < 1) throw std::invalid_argument("rolling_mean: window must be >= 1");
    std::vector<double> out(series.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < series.size(); ++i) {
        sum += series[i];
        if (i >= static_cast<std::size_t>(window)) sum -= series[i - window];
        const std::size_t n = std::min<std::size_t>(i + 1, window);
        out[i] = sum / static_cast<double>(n);
    }
    return out;
}

std::string format_metric(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", value);
    return buf;
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& columns)
    : out_(path), n_columns_(columns.size()) {
    if (!out_) throw std::runtime_error("cannot open for write: " + path);
    for (std::size_t i = 0; i < columns.size(); ++i) {
        out_ << (i ? "," : "") << columns[i];
    }
    out_ << "\n";
}

void CsvWriter::row(std::span<const double> values) {
    if (values.size() != n_columns_) {
        throw std::invalid_argument("CsvWriter: column count mismatch");
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
        out_ << (i ? "," : "") << format_metric(values[i]);
    }
    out_ << "\n";
}

void CsvWriter::close() { out_.close(); }

int CsvTable::column_index(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (columns[i] == name) return static_cast<int>(i);
    }
    return -1;
}

std::vector<double> CsvTable::column(const std::string& name) const {
    const int idx = column_index(name);
    if (idx < 0) throw std::invalid_argument("csv column not found: " + name);
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& row : rows) out.push_back(row[idx]);
    return out;
}

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open for read: " + path);
    CsvTable table;
    std::string line;
    if (!std::getline(in, line)) return table;
    std::stringstream header(line);
    std::string cell;
    while (std::getline(header, cell, ',')) table.columns.push_back(cell);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream fields(line);
        while (std::getline(fields, cell, ',')) row.push_back(std::stod(cell));
        if (row.size() != table.columns.size()) {
            throw std::runtime_error("ragged csv row in " + path);
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

}  // namespace qmarl
